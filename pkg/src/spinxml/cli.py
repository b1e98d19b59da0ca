"""Command-line front door and the document/edit HTTP server.

Subcommands: validate, convert, import, export, scene, dipolar, edit and
serve.  All batch subcommands are deterministic; exit code 0 means no
errors (warnings alone never fail a run) and any module error is reported
as a single machine-parsable ``error: <message>`` line on stderr.

Serve mode holds one document per process and handles requests strictly
serially:

  GET  /system                    -> spin system JSON
  PUT  /system                    -> replace document (JSON or XML body)
  GET  /scene?mode=nmr|epr        -> scene JSON
  GET  /interactions/{id}/bundle  -> representation bundle JSON
  POST /interactions/{id}/edit    -> body {"edited": field, "value": ...},
                                     applies the edit, returns the bundle
  GET  /export?target=...&regime=...  -> {"target", "regime", "text"}
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from http.server import BaseHTTPRequestHandler, HTTPServer
from urllib.parse import parse_qs, urlparse

import numpy as np

from .amplitudes import DegenerateConventionError, InvalidComponentsError
from .exporters import (
    EASYSPIN_REGIMES,
    ExportOptions,
    TARGETS,
    UnsupportedTargetError,
    export,
    export_simpson,
)
from .geometry import build_scene, dipolar_tensor
from .importers import ImportFileError, ImportOptions, import_gaussian_log, \
    import_magres, import_xyz
from .model import SpinSystem, apply_edit, bundle_for_term, validate_system
from .rotations import InvalidRotationError
from .serialize import (
    bundle_to_dict,
    scene_to_dict,
    spherical_from_dict,
    system_from_dict,
    system_to_dict,
)
from .spinxml_io import (
    SpinXMLParseError,
    convert_rotations,
    parse_spinxml,
    validate_against_schema,
    write_spinxml,
)

_MODULE_ERRORS = (SpinXMLParseError, ImportFileError, UnsupportedTargetError,
                  InvalidRotationError, DegenerateConventionError,
                  InvalidComponentsError, ValueError, OSError, KeyError)


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write_out(path: str | None, data: bytes):
    if path is None or path == "-":
        _sys.stdout.write(data.decode("utf-8"))
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _load_system(path: str) -> SpinSystem:
    return parse_spinxml(_read(path)).system


def _cmd_validate(args) -> int:
    data = _read(args.input)
    issues = validate_against_schema(data)
    for loc, msg in issues:
        print(f"schema error: {loc}: {msg}")
    if issues:
        return 1
    report = parse_spinxml(data)
    semantic = validate_system(report.system)
    for loc, msg in report.warnings + semantic.warnings:
        print(f"warning: {loc}: {msg}")
    for loc, msg in semantic.errors:
        print(f"error: {loc}: {msg}")
    if semantic.errors:
        return 1
    print(f"ok: {len(report.system.spins)} spins, "
          f"{len(report.system.interactions)} interactions")
    return 0


def _cmd_convert(args) -> int:
    system = _load_system(args.input)
    if args.orientation == "dcm":
        system = convert_rotations(system, "dcm")
    style = "normalize" if args.amplitude == "matrix" else "preserve"
    _write_out(args.output, write_spinxml(system, style))
    return 0


def _cmd_import(args) -> int:
    text = _read(args.input).decode("utf-8", errors="replace")
    if args.format == "xyz":
        report = import_xyz(text)
        if args.threshold:
            raise ValueError("threshold does not apply to XYZ imports (no interactions)")
    elif args.format == "gaussian":
        report = import_gaussian_log(text, ImportOptions(norm_threshold=args.threshold))
    else:
        report = import_magres(text)
        if args.threshold:
            from .importers import filter_by_norm
            report = type(report)(system=filter_by_norm(report.system, args.threshold),
                                  warnings=report.warnings)
    for loc, msg in report.warnings:
        print(f"warning: {loc}: {msg}", file=_sys.stderr)
    _write_out(args.output, write_spinxml(report.system))
    return 0


def _cmd_export(args) -> int:
    system = _load_system(args.input)
    if args.target == "simpson":
        text = export_simpson(system,
                              dipoles_from_coordinates=args.dipoles_from_coordinates)
    else:
        text = export(system, ExportOptions(target=args.target,
                                            easyspin_regime=args.regime))
    _write_out(args.output, text.encode("utf-8"))
    return 0


def _parse_scales(pairs: list[str] | None) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or ():
        name, _, raw = pair.partition("=")
        if not _:
            raise ValueError(f"--scale expects role=value, got {pair!r}")
        out[name] = float(raw)
    return out


def _cmd_scene(args) -> int:
    system = _load_system(args.input)
    scene = build_scene(system, mode=args.mode, scales=_parse_scales(args.scale),
                        bond_threshold=args.bond_threshold,
                        display_threshold=args.display_threshold)
    _write_out(args.output, (json.dumps(scene_to_dict(scene), indent=2) + "\n").encode())
    return 0


def _cmd_dipolar(args) -> int:
    system = _load_system(args.input)
    try:
        a_id, b_id = (int(v) for v in args.pair.split(","))
    except ValueError:
        raise ValueError(f"--pair expects two spin ids like 1,2, got {args.pair!r}") from None
    spin_a, spin_b = system.spin_by_id(a_id), system.spin_by_id(b_id)
    if spin_a is None or spin_b is None:
        raise ValueError(f"pair {a_id},{b_id}: no such spins in the document")
    d = dipolar_tensor(spin_a, spin_b)
    for row in d:
        print(" ".join(f"{v:.12g}" for v in row))
    return 0


def _edit_value(field: str, raw):
    if field == "spherical":
        return spherical_from_dict(raw)
    if field == "euler" and isinstance(raw, dict):
        return (raw["alpha"], raw["beta"], raw["gamma"])
    if field == "matrix":
        return np.asarray(raw, dtype=float)
    return raw


def _cmd_edit(args) -> int:
    system = _load_system(args.input)
    field, _, raw = args.set.partition("=")
    if not _:
        raise ValueError(f"--set expects field=json, got {args.set!r}")
    value = _edit_value(field, json.loads(raw))
    term = system.interaction_by_id(args.interaction)
    if term is None:
        raise ValueError(f"no interaction with id {args.interaction}")
    new_term, bundle = apply_edit(term, field, value)
    system = system.with_interaction_replaced(new_term)
    _write_out(args.output or args.input, write_spinxml(system))
    print(json.dumps(bundle_to_dict(bundle), indent=2))
    return 0


class _State:
    def __init__(self, system: SpinSystem):
        self.system = system


class _Handler(BaseHTTPRequestHandler):
    state: _State  # assigned by serve()
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet server
        pass

    def _send(self, code: int, payload: dict):
        body = json.dumps(payload).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        # one connection per request: a parked keep-alive connection would
        # block this strictly serial server for every other client
        self.send_header("Connection", "close")
        self.end_headers()
        self.wfile.write(body)
        self.close_connection = True

    def _body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length)

    def do_OPTIONS(self):
        self._send(200, {})

    def do_GET(self):
        url = urlparse(self.path)
        q = parse_qs(url.query)
        try:
            if url.path == "/system":
                self._send(200, system_to_dict(self.state.system))
            elif url.path == "/scene":
                mode = q.get("mode", ["nmr"])[0]
                bt = float(q.get("bond_threshold", ["1.8"])[0])
                scene = build_scene(self.state.system, mode=mode, bond_threshold=bt)
                self._send(200, scene_to_dict(scene))
            elif url.path == "/export":
                target = q.get("target", ["simpson"])[0]
                regime = q.get("regime", ["liquid"])[0]
                text = export(self.state.system,
                              ExportOptions(target=target, easyspin_regime=regime))
                self._send(200, {"target": target, "regime": regime, "text": text})
            elif url.path.startswith("/interactions/") and url.path.endswith("/bundle"):
                term_id = int(url.path.split("/")[2])
                term = self.state.system.interaction_by_id(term_id)
                if term is None:
                    self._send(404, {"error": f"no interaction {term_id}"})
                    return
                self._send(200, bundle_to_dict(bundle_for_term(term)))
            else:
                self._send(404, {"error": f"unknown path {url.path}"})
        except _MODULE_ERRORS as e:
            self._send(400, {"error": str(e)})

    def do_PUT(self):
        url = urlparse(self.path)
        if url.path != "/system":
            self._send(404, {"error": f"unknown path {url.path}"})
            return
        body = self._body()
        try:
            if body.lstrip().startswith(b"<"):
                report = parse_spinxml(body)
                system = report.system
                warnings_ = [f"{loc}: {msg}" for loc, msg in report.warnings]
            else:
                system = system_from_dict(json.loads(body))
                warnings_ = []
            semantic = validate_system(system)
            if semantic.errors:
                self._send(400, {"errors": [f"{loc}: {msg}"
                                            for loc, msg in semantic.errors]})
                return
            self.state.system = system
            warnings_ += [f"{loc}: {msg}" for loc, msg in semantic.warnings]
            self._send(200, {"ok": True, "warnings": warnings_})
        except (*_MODULE_ERRORS, json.JSONDecodeError) as e:
            self._send(400, {"error": str(e)})

    def do_POST(self):
        url = urlparse(self.path)
        parts = url.path.strip("/").split("/")
        if len(parts) == 3 and parts[0] == "interactions" and parts[2] == "edit":
            try:
                term_id = int(parts[1])
            except ValueError:
                self._send(400, {"error": f"bad interaction id {parts[1]!r}"})
                return
            term = self.state.system.interaction_by_id(term_id)
            if term is None:
                self._send(404, {"error": f"no interaction {term_id}"})
                return
            try:
                payload = json.loads(self._body())
                edited = payload["edited"]
                value = _edit_value(edited, payload["value"])
                new_term, bundle = apply_edit(term, edited, value)
            except (*_MODULE_ERRORS, json.JSONDecodeError, TypeError) as e:
                self._send(400, {"error": str(e)})
                return
            self.state.system = self.state.system.with_interaction_replaced(new_term)
            self._send(200, bundle_to_dict(bundle))
        else:
            self._send(404, {"error": f"unknown path {url.path}"})


def make_server(system: SpinSystem, port: int = 0,
                host: str = "127.0.0.1") -> HTTPServer:
    """Single-threaded document server; requests are processed serially."""
    state = _State(system)
    handler = type("Handler", (_Handler,), {"state": state})
    return HTTPServer((host, port), handler)


def _cmd_serve(args) -> int:
    system = _load_system(args.input) if args.input else SpinSystem()
    server = make_server(system, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinxml",
                                description="spin system document toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="schema and semantic checks")
    v.add_argument("input")
    v.set_defaults(fn=_cmd_validate)

    c = sub.add_parser("convert", help="rewrite amplitudes/orientations")
    c.add_argument("input")
    c.add_argument("--amplitude", choices=("preserve", "matrix"), default="preserve")
    c.add_argument("--orientation", choices=("preserve", "dcm"), default="preserve")
    c.add_argument("-o", "--output")
    c.set_defaults(fn=_cmd_convert)

    i = sub.add_parser("import", help="build a document from external files")
    i.add_argument("format", choices=("gaussian", "xyz", "magres"))
    i.add_argument("input")
    i.add_argument("--threshold", type=float, default=0.0,
                   help="drop interactions with Frobenius norm below this")
    i.add_argument("-o", "--output")
    i.set_defaults(fn=_cmd_import)

    e = sub.add_parser("export", help="write simulator input text")
    e.add_argument("target", choices=TARGETS)
    e.add_argument("input")
    e.add_argument("--regime", choices=EASYSPIN_REGIMES, default="liquid")
    e.add_argument("--dipoles-from-coordinates", action="store_true")
    e.add_argument("-o", "--output")
    e.set_defaults(fn=_cmd_export)

    s = sub.add_parser("scene", help="render-ready scene JSON")
    s.add_argument("input")
    s.add_argument("--mode", choices=("nmr", "epr"), default="nmr")
    s.add_argument("--bond-threshold", type=float, default=1.8)
    s.add_argument("--display-threshold", type=float, default=0.0)
    s.add_argument("--scale", action="append", metavar="ROLE=VALUE")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=_cmd_scene)

    d = sub.add_parser("dipolar", help="dipolar tensor from coordinates (Hz)")
    d.add_argument("input")
    d.add_argument("--pair", required=True, help="two spin ids, e.g. 1,2")
    d.set_defaults(fn=_cmd_dipolar)

    ed = sub.add_parser("edit", help="edit one interaction representation")
    ed.add_argument("input")
    ed.add_argument("--interaction", type=int, required=True)
    ed.add_argument("--set", required=True, metavar="FIELD=JSON")
    ed.add_argument("-o", "--output")
    ed.set_defaults(fn=_cmd_edit)

    sv = sub.add_parser("serve", help="HTTP document/edit server for the editor UI")
    sv.add_argument("input", nargs="?")
    sv.add_argument("--port", type=int, default=8077)
    sv.set_defaults(fn=_cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _MODULE_ERRORS as e:
        print(f"error: {e}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
