"""Canonical JSON projections of documents, bundles and scenes.

Keys are snake_case and mirror the XML attribute names.  Floats are
emitted through Python's shortest round-trip repr (at most 17 significant
digits), so a projection parsed back recovers every value bit-exactly.
Complex numbers are [re, im] pairs.
"""

from __future__ import annotations

import numpy as np

from .amplitudes import (
    RepresentationBundle,
    SphericalComponents,
    EDITABLE_FIELDS,
)
from .geometry import SceneDocument
from .model import (
    AmplitudeSpec,
    EigenAmplitude,
    ExplicitEigenvalues,
    InteractionKind,
    InteractionTerm,
    IsoAnisoAsym,
    IsoAxRh,
    IsoSpanSkew,
    MatrixAmplitude,
    ScalarAmplitude,
    Spin,
    SpinSystem,
)
from .rotations import AngleAxis, DCM, EulerAngles, Quaternion, Rotation


def _vec(v) -> dict:
    x, y, z = (float(c) for c in v)
    return {"x": x, "y": y, "z": z}


def _mat(m) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.asarray(m)]


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def rotation_to_dict(r: Rotation) -> dict:
    if isinstance(r, EulerAngles):
        return {"type": "euler_angles", "alpha": r.alpha, "beta": r.beta,
                "gamma": r.gamma}
    if isinstance(r, AngleAxis):
        return {"type": "angle_axis", "angle": r.angle, "axis": _vec(r.axis)}
    if isinstance(r, Quaternion):
        return {"type": "quaternion", "w": r.w, "x": r.x, "y": r.y, "z": r.z}
    if isinstance(r, DCM):
        return {"type": "dcm", "matrix": _mat(r.matrix)}
    raise TypeError(f"not a rotation: {r!r}")


def rotation_from_dict(d: dict) -> Rotation:
    t = d.get("type")
    if t == "euler_angles":
        return EulerAngles(alpha=float(d["alpha"]), beta=float(d["beta"]),
                           gamma=float(d["gamma"]))
    if t == "angle_axis":
        ax = d["axis"]
        return AngleAxis(angle=float(d["angle"]),
                         axis=np.array([ax["x"], ax["y"], ax["z"]], dtype=float))
    if t == "quaternion":
        return Quaternion(w=float(d["w"]), x=float(d["x"]), y=float(d["y"]),
                          z=float(d["z"]))
    if t == "dcm":
        return DCM(np.asarray(d["matrix"], dtype=float))
    raise ValueError(f"unknown rotation type {t!r}")


def amplitude_to_dict(amp: AmplitudeSpec) -> dict:
    if isinstance(amp, ScalarAmplitude):
        return {"type": "scalar", "value": amp.value}
    if isinstance(amp, MatrixAmplitude):
        return {"type": "tensor", "matrix": _mat(amp.matrix)}
    ev = amp.eigenvalues
    if isinstance(ev, ExplicitEigenvalues):
        out = {"type": "eigenvalues", "xx": ev.xx, "yy": ev.yy, "zz": ev.zz}
    elif isinstance(ev, IsoAnisoAsym):
        out = {"type": "aniso_asym", "iso": ev.iso, "aniso": ev.aniso,
               "asym": ev.asym}
    elif isinstance(ev, IsoAxRh):
        out = {"type": "ax_rh", "iso": ev.iso, "ax": ev.ax, "rh": ev.rh}
    elif isinstance(ev, IsoSpanSkew):
        out = {"type": "span_skew", "iso": ev.iso, "span": ev.span,
               "skew": ev.skew}
    else:
        raise TypeError(f"not an eigenvalue spec: {ev!r}")
    out["rotation"] = None if amp.rotation is None else rotation_to_dict(amp.rotation)
    return out


def amplitude_from_dict(d: dict) -> AmplitudeSpec:
    t = d.get("type")
    if t == "scalar":
        return ScalarAmplitude(value=float(d["value"]))
    if t == "tensor":
        return MatrixAmplitude(matrix=np.asarray(d["matrix"], dtype=float))
    if t == "eigenvalues":
        ev = ExplicitEigenvalues(xx=float(d["xx"]), yy=float(d["yy"]),
                                 zz=float(d["zz"]))
    elif t == "aniso_asym":
        ev = IsoAnisoAsym(iso=float(d["iso"]), aniso=float(d["aniso"]),
                          asym=float(d["asym"]))
    elif t == "ax_rh":
        ev = IsoAxRh(iso=float(d["iso"]), ax=float(d["ax"]), rh=float(d["rh"]))
    elif t == "span_skew":
        ev = IsoSpanSkew(iso=float(d["iso"]), span=float(d["span"]),
                         skew=float(d["skew"]))
    else:
        raise ValueError(f"unknown amplitude type {t!r}")
    rot = d.get("rotation")
    return EigenAmplitude(eigenvalues=ev,
                          rotation=None if rot is None else rotation_from_dict(rot))


def system_to_dict(sys: SpinSystem) -> dict:
    return {
        "spins": [
            {
                "number": s.id,
                "isotope": s.isotope,
                "label": s.label,
                "coordinates": None if s.coordinates is None else _vec(s.coordinates),
            }
            for s in sys.spins
        ],
        "interactions": [
            {
                "id": t.id,
                "kind": t.kind.value,
                "units": t.units,
                "spin_1": t.spin_1,
                "spin_2": t.spin_2,
                "label": t.label,
                "reference": t.reference,
                "amplitude": amplitude_to_dict(t.amplitude),
            }
            for t in sys.interactions
        ],
    }


def system_from_dict(d: dict) -> SpinSystem:
    spins = []
    for s in d.get("spins", ()):
        coords = s.get("coordinates")
        spins.append(Spin(
            id=int(s["number"]), isotope=str(s["isotope"]),
            coordinates=None if coords is None
            else np.array([coords["x"], coords["y"], coords["z"]], dtype=float),
            label=s.get("label")))
    terms = []
    for i, t in enumerate(d.get("interactions", ()), start=1):
        terms.append(InteractionTerm(
            id=int(t.get("id", i)), kind=InteractionKind(t["kind"]),
            units=t.get("units"), spin_1=int(t["spin_1"]),
            spin_2=None if t.get("spin_2") is None else int(t["spin_2"]),
            label=t.get("label"), reference=t.get("reference"),
            amplitude=amplitude_from_dict(t["amplitude"])))
    return SpinSystem(spins=tuple(spins), interactions=tuple(terms))


def spherical_to_dict(s: SphericalComponents) -> dict:
    return {
        "rank0": _cplx(s.rank0),
        "rank1": [_cplx(z) for z in s.rank1],
        "rank2": [_cplx(z) for z in s.rank2],
    }


def spherical_from_dict(d: dict) -> SphericalComponents:
    def c(pair):
        return complex(float(pair[0]), float(pair[1]))
    return SphericalComponents(
        rank0=c(d["rank0"]),
        rank1=np.array([c(p) for p in d["rank1"]]),
        rank2=np.array([c(p) for p in d["rank2"]]),
    )


def bundle_to_dict(b: RepresentationBundle) -> dict:
    return {
        "matrix": _mat(b.matrix),
        "eigenvalues": [float(v) for v in b.eigenvalues],
        "eigenvectors": _mat(b.eigenvectors),
        "euler": {"alpha": b.euler.alpha, "beta": b.euler.beta,
                  "gamma": b.euler.gamma},
        "angle_axis": {"angle": b.angle_axis.angle, "axis": _vec(b.angle_axis.axis)},
        "quaternion": {"w": b.quaternion.w, "x": b.quaternion.x,
                       "y": b.quaternion.y, "z": b.quaternion.z},
        "dcm": _mat(b.dcm),
        "spherical": spherical_to_dict(b.spherical),
        "haeberlen": None if b.haeberlen is None else
        {"iso": b.haeberlen.iso, "aniso": b.haeberlen.aniso,
         "asym": b.haeberlen.asym},
        "ax_rh": {"iso": b.axrh.iso, "ax": b.axrh.ax, "rh": b.axrh.rh},
        "span_skew": None if b.spanskew is None else
        {"iso": b.spanskew.iso, "span": b.spanskew.span, "skew": b.spanskew.skew},
        "span_skew_kind": b.spanskew_kind,
        "wigner": [[_cplx(z) for z in row] for row in b.wigner],
        "editable": list(EDITABLE_FIELDS),
    }


def scene_to_dict(scene: SceneDocument) -> dict:
    return {
        "mode": scene.mode,
        "atoms": [
            {"id": a.id, "element": a.element, "isotope": a.isotope,
             "coordinates": _vec(a.coordinates)}
            for a in scene.atoms
        ],
        "bonds": [{"a": a, "b": b} for a, b in scene.bonds],
        "ellipsoids": [
            {
                "interaction_id": e.interaction_id,
                "center": _vec(e.center),
                "semi_axes": [float(v) for v in e.semi_axes],
                "orientation": {"w": e.orientation.w, "x": e.orientation.x,
                                "y": e.orientation.y, "z": e.orientation.z},
                "eigen_signs": list(e.eigen_signs),
                "color_role": e.color_role,
                "degenerate": e.degenerate,
            }
            for e in scene.ellipsoids
        ],
        "lines": [
            {"interaction_id": g.interaction_id, "spin_1": g.spin_1,
             "spin_2": g.spin_2, "magnitude": g.magnitude}
            for g in scene.lines
        ],
        "coils": [
            {"interaction_id": g.interaction_id, "spin_1": g.spin_1,
             "spin_2": g.spin_2, "magnitude": g.magnitude}
            for g in scene.coils
        ],
        "electrons": [
            {"id": e.id, "position": _vec(e.position)} for e in scene.electrons
        ],
        "scale_factors": dict(scene.scale_factors),
    }
