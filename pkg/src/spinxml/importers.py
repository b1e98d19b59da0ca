"""Build spin system documents from electronic-structure output files.

Supported inputs: XYZ coordinate files (isotopes guessed from the element,
most abundant natural isotope, with a warning when the guess is not
magnetic), Gaussian 03/09 text logs (coordinates, GIAO shielding tensors,
total J coupling matrix) and CASTEP magres files in both the old block
layout and the new annotated layout.

When a file carries several instances of the same table (geometry
optimizations print one coordinate table per step) the last one is read.
Every imported interaction maps to a specific source block, recorded as a
provenance note in the term label.  Import can drop interactions whose
total magnitude, the Frobenius norm of the promoted tensor in the source
block's native units, falls below a threshold.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import isotopes
from .amplitudes import frobenius_norm
from .model import (
    InteractionKind,
    InteractionTerm,
    Issue,
    MatrixAmplitude,
    ScalarAmplitude,
    Spin,
    SpinSystem,
    promote_amplitude,
)
from .spinxml_io import ParseReport


class ImportFileError(ValueError):
    """Input text cannot be interpreted as the expected file format."""


@dataclass(frozen=True)
class ImportOptions:
    """Magnitude filter and kind selection applied at import time."""

    norm_threshold: float = 0.0
    include: frozenset[InteractionKind] = field(
        default_factory=lambda: frozenset(InteractionKind))

    def __post_init__(self):
        if not np.isfinite(self.norm_threshold):
            raise ValueError("norm threshold must be finite")
        if self.norm_threshold < 0.0:
            raise ValueError("norm threshold must be >= 0")


def _guess_spin(index: int, element: str, coords, warnings_: list[Issue],
                label: str | None = None) -> Spin:
    try:
        isotope = isotopes.guess_isotope(element)
    except KeyError:
        raise ImportFileError(f"unknown element symbol {element!r}") from None
    rec = isotopes.lookup(isotope)
    if rec is not None and not rec.magnetic:
        warnings_.append(Issue(f"spin {index}",
                               f"non-magnetic isotope {isotope} guessed for {element}"))
    return Spin(id=index, isotope=isotope,
                coordinates=np.asarray(coords, dtype=float), label=label)


def import_xyz(text: str) -> ParseReport:
    """Read a standard XYZ file: count line, comment line, element x y z rows.

    Produces one spin per row and no interactions.
    """
    lines = text.splitlines()
    stripped = [ln for ln in lines]
    if not any(ln.strip() for ln in stripped):
        raise ImportFileError("empty XYZ file")
    try:
        count = int(stripped[0].split()[0])
    except (IndexError, ValueError):
        raise ImportFileError("first XYZ line must be the atom count") from None
    rows = [ln for ln in stripped[2:] if ln.strip()]
    if len(rows) != count:
        raise ImportFileError(
            f"atom count mismatch: header says {count}, found {len(rows)} rows")
    warnings_: list[Issue] = []
    spins = []
    for i, row in enumerate(rows, start=1):
        parts = row.split()
        if len(parts) < 4:
            raise ImportFileError(f"XYZ row {i} has fewer than 4 fields")
        try:
            coords = [float(v) for v in parts[1:4]]
        except ValueError:
            raise ImportFileError(f"XYZ row {i} has non-numeric coordinates") from None
        spins.append(_guess_spin(i, parts[0], coords, warnings_))
    return ParseReport(system=SpinSystem(spins=tuple(spins)),
                       warnings=tuple(warnings_))


# Anchor phrases for the Gaussian blocks we read.  Gaussian versions vary;
# the full set lives here so fixtures and parser stay in one place.
GAUSSIAN_COORD_ANCHORS = (
    "Standard orientation:",
    "Input orientation:",
    "Z-Matrix orientation:",
)
GAUSSIAN_SHIELDING_ANCHOR = "SCF GIAO Magnetic shielding tensor (ppm):"
GAUSSIAN_JCOUPLING_ANCHOR = "Total nuclear spin-spin coupling J (Hz):"

_COORD_ROW = re.compile(
    r"^\s*(\d+)\s+(\d+)\s+(-?\d+)\s+(-?\d+\.\d+)\s+(-?\d+\.\d+)\s+(-?\d+\.\d+)\s*$")
_TENSOR_COMP = re.compile(r"([XYZ])([XYZ])=\s*(-?[\d.]+(?:[DEde][+-]?\d+)?)")
_AXIS_INDEX = {"X": 0, "Y": 1, "Z": 2}


def _last_gaussian_coords(lines: list[str]) -> list[tuple[int, np.ndarray]]:
    starts = [i for i, ln in enumerate(lines)
              if any(a in ln for a in GAUSSIAN_COORD_ANCHORS)]
    if not starts:
        raise ImportFileError("no coordinate table found in Gaussian log")
    i = starts[-1]
    atoms: list[tuple[int, np.ndarray]] = []
    for ln in lines[i + 1:]:
        m = _COORD_ROW.match(ln)
        if m:
            z = int(m.group(2))
            xyz = np.array([float(m.group(k)) for k in (4, 5, 6)])
            atoms.append((z, xyz))
        elif atoms and not m:
            if ln.strip().startswith("---") and len(atoms) > 0:
                # closing rule of the table once rows have been seen
                break
            if not ln.strip().startswith("---"):
                break
    if not atoms:
        raise ImportFileError("coordinate table is empty")
    return atoms


def _gaussian_shielding(lines: list[str]) -> dict[int, np.ndarray]:
    starts = [i for i, ln in enumerate(lines) if GAUSSIAN_SHIELDING_ANCHOR in ln]
    if not starts:
        return {}
    tensors: dict[int, np.ndarray] = {}
    i = starts[-1] + 1
    atom = None
    current = np.zeros((3, 3))
    seen = 0
    header = re.compile(r"^\s*(\d+)\s+([A-Za-z]+)\s+Isotropic\s*=")
    while i < len(lines):
        ln = lines[i]
        h = header.match(ln)
        if h:
            atom = int(h.group(1))
            current = np.zeros((3, 3))
            seen = 0
        else:
            comps = _TENSOR_COMP.findall(ln)
            if comps and atom is not None:
                for a, b, raw in comps:
                    current[_AXIS_INDEX[a], _AXIS_INDEX[b]] = float(
                        raw.replace("D", "E").replace("d", "e"))
                    seen += 1
                if seen == 9:
                    tensors[atom] = current
                    atom = None
            elif atom is None and ln.strip() and "Eigenvalues" not in ln \
                    and "Eigenvectors" not in ln and not comps:
                break
        i += 1
    return tensors


def _gaussian_jcouplings(lines: list[str]) -> dict[tuple[int, int], float]:
    starts = [i for i, ln in enumerate(lines) if GAUSSIAN_JCOUPLING_ANCHOR in ln]
    if not starts:
        return {}
    out: dict[tuple[int, int], float] = {}
    i = starts[-1] + 1
    columns: list[int] = []
    while i < len(lines):
        parts = lines[i].split()
        if not parts:
            break
        if all(re.fullmatch(r"\d+", p) for p in parts):
            columns = [int(p) for p in parts]
        else:
            try:
                row = int(parts[0])
                values = [float(p.replace("D", "E").replace("d", "e"))
                          for p in parts[1:]]
            except ValueError:
                break
            for col, v in zip(columns, values):
                out[(min(row, col), max(row, col))] = v
        i += 1
    return out


def import_gaussian_log(text: str, opts: ImportOptions | None = None) -> ParseReport:
    """Read a Gaussian log: last coordinate table, GIAO shielding tensors
    (ppm, reference "absolute") and the total J matrix (Hz, scalar terms).

    Zero J entries carry no data and are skipped.  Terms whose promoted
    Frobenius norm falls below ``opts.norm_threshold`` are dropped.
    """
    opts = opts or ImportOptions()
    lines = text.splitlines()
    atoms = _last_gaussian_coords(lines)
    warnings_: list[Issue] = []
    spins = []
    for idx, (z, xyz) in enumerate(atoms, start=1):
        element = isotopes.ELEMENT_BY_NUMBER.get(z)
        if element is None:
            raise ImportFileError(f"unsupported atomic number {z}")
        spins.append(_guess_spin(idx, element, xyz, warnings_))

    terms: list[InteractionTerm] = []
    shieldings = _gaussian_shielding(lines)
    if not shieldings:
        warnings_.append(Issue("gaussian", "no GIAO shielding block found"))
    if InteractionKind.SHIELDING in opts.include:
        for atom in sorted(shieldings):
            if atom > len(spins):
                warnings_.append(Issue("gaussian",
                                       f"shielding for unknown atom {atom} skipped"))
                continue
            terms.append(InteractionTerm(
                id=len(terms) + 1, kind=InteractionKind.SHIELDING, units="ppm",
                spin_1=atom, reference="absolute",
                label=f"GIAO shielding, atom {atom}",
                amplitude=MatrixAmplitude(matrix=shieldings[atom])))

    js = _gaussian_jcouplings(lines)
    if not js:
        warnings_.append(Issue("gaussian", "no J coupling block found"))
    if InteractionKind.JCOUPLING in opts.include:
        for (a, b) in sorted(js):
            v = js[(a, b)]
            if a == b or v == 0.0:
                continue
            if b > len(spins):
                warnings_.append(Issue("gaussian",
                                       f"J coupling for unknown atom {b} skipped"))
                continue
            terms.append(InteractionTerm(
                id=len(terms) + 1, kind=InteractionKind.JCOUPLING, units="Hz",
                spin_1=a, spin_2=b, label=f"total J, atoms {a}-{b}",
                amplitude=ScalarAmplitude(value=v)))

    system = SpinSystem(spins=tuple(spins), interactions=tuple(terms))
    system = filter_by_norm(system, opts.norm_threshold)
    return ParseReport(system=system, warnings=tuple(warnings_))


_MAGRES_NEW_MAGIC = re.compile(r"^#\$magres-abinitio-v[\d.]+")


def import_magres(text: str) -> ParseReport:
    """Read a CASTEP magres file, auto-detecting old or new dialect."""
    for ln in text.splitlines():
        if ln.strip():
            if _MAGRES_NEW_MAGIC.match(ln.strip()):
                return _import_magres_new(text)
            break
    if re.search(r"^\s*Atom:\s+\w+\s+\d+", text, re.MULTILINE):
        return _import_magres_old(text)
    raise ImportFileError("unrecognized magres dialect")


def _import_magres_new(text: str) -> ParseReport:
    warnings_: list[Issue] = []
    atom_rows: dict[tuple[str, int], tuple[str, np.ndarray]] = {}
    ms_rows: dict[tuple[str, int], np.ndarray] = {}
    isc_rows: dict[tuple[str, int, str, int], float] = {}
    units: dict[str, str] = {}
    order: list[tuple[str, int]] = []
    section = None
    for ln in text.splitlines():
        s = ln.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("[/"):
            section = None
            continue
        if s.startswith("["):
            section = s.strip("[]").strip()
            continue
        parts = s.split()
        if section == "atoms" and parts[0] == "atom" and len(parts) >= 7:
            key = (parts[1], int(parts[3]))
            if key not in atom_rows:
                order.append(key)
            atom_rows[key] = (parts[2], np.array([float(v) for v in parts[4:7]]))
        elif section == "magres" and parts[0] == "units" and len(parts) >= 3:
            units[parts[1]] = parts[2]
        elif section == "magres" and parts[0] == "ms" and len(parts) >= 12:
            key = (parts[1], int(parts[2]))
            ms_rows[key] = np.array([float(v) for v in parts[3:12]]).reshape(3, 3)
        elif section == "magres" and parts[0] == "isc" and len(parts) >= 14:
            k = np.array([float(v) for v in parts[5:14]]).reshape(3, 3)
            isc_rows[(parts[1], int(parts[2]), parts[3], int(parts[4]))] = \
                float(np.trace(k) / 3.0)
    if not atom_rows:
        raise ImportFileError("magres file has no atoms block")
    spins = []
    index_of: dict[tuple[str, int], int] = {}
    for i, key in enumerate(order, start=1):
        label, coords = atom_rows[key]
        spins.append(_guess_spin(i, key[0], coords, warnings_, label=label))
        index_of[key] = i
    terms: list[InteractionTerm] = []
    for key in order:
        if key in ms_rows:
            terms.append(InteractionTerm(
                id=len(terms) + 1, kind=InteractionKind.SHIELDING,
                units=units.get("ms", "ppm"), spin_1=index_of[key],
                reference="absolute",
                label=f"magres ms, {key[0]} {key[1]}",
                amplitude=MatrixAmplitude(matrix=ms_rows[key])))
    for (el1, i1, el2, i2), j_iso in isc_rows.items():
        k1, k2 = (el1, i1), (el2, i2)
        if k1 not in index_of or k2 not in index_of:
            warnings_.append(Issue("magres", f"isc references unknown atom {k1} or {k2}"))
            continue
        terms.append(InteractionTerm(
            id=len(terms) + 1, kind=InteractionKind.JCOUPLING,
            units=units.get("isc", "Hz"), spin_1=index_of[k1], spin_2=index_of[k2],
            label=f"magres isc, {el1} {i1} - {el2} {i2}",
            amplitude=ScalarAmplitude(value=j_iso)))
    return ParseReport(system=SpinSystem(spins=tuple(spins), interactions=tuple(terms)),
                       warnings=tuple(warnings_))


_OLD_ATOM = re.compile(r"^\s*Atom:\s+(\w+)\s+(\d+)\s*$")
_OLD_COORDS = re.compile(
    r"Coordinates\s+(-?[\d.]+)\s+(-?[\d.]+)\s+(-?[\d.]+)")
_NUMROW = re.compile(r"^\s*(-?[\d.]+(?:[Ee][+-]?\d+)?)\s+(-?[\d.]+(?:[Ee][+-]?\d+)?)"
                     r"\s+(-?[\d.]+(?:[Ee][+-]?\d+)?)\s*$")


def _import_magres_old(text: str) -> ParseReport:
    warnings_: list[Issue] = []
    lines = text.splitlines()
    atoms: dict[tuple[str, int], dict] = {}
    order: list[tuple[str, int]] = []
    current: dict | None = None
    i = 0
    while i < len(lines):
        ln = lines[i]
        m = _OLD_ATOM.match(ln)
        if m:
            key = (m.group(1), int(m.group(2)))
            if key not in atoms:
                order.append(key)
            # duplicate headers: last occurrence wins
            atoms[key] = current = {"coords": None, "ms": None}
            i += 1
            continue
        if current is not None:
            c = _OLD_COORDS.search(ln)
            if c:
                current["coords"] = np.array([float(c.group(k)) for k in (1, 2, 3)])
                i += 1
                continue
            if "Shielding Tensor" in ln and "TOTAL" in ln.upper():
                rows = []
                j = i + 1
                while j < len(lines) and len(rows) < 3:
                    r = _NUMROW.match(lines[j])
                    if r:
                        rows.append([float(r.group(k)) for k in (1, 2, 3)])
                    elif rows:
                        break
                    j += 1
                if len(rows) != 3:
                    raise ImportFileError(
                        f"old magres: truncated shielding tensor near line {i + 1}")
                current["ms"] = np.array(rows)
                i = j
                continue
        i += 1
    if not atoms:
        raise ImportFileError("old magres file has no Atom blocks")
    spins = []
    index_of = {}
    for n, key in enumerate(order, start=1):
        data = atoms[key]
        coords = data["coords"] if data["coords"] is not None else np.zeros(3)
        if data["coords"] is None:
            warnings_.append(Issue(f"atom {key[0]} {key[1]}", "no coordinates found"))
        spins.append(_guess_spin(n, key[0], coords, warnings_, label=f"{key[0]}{key[1]}"))
        index_of[key] = n
    terms = []
    for key in order:
        ms = atoms[key]["ms"]
        if ms is not None:
            terms.append(InteractionTerm(
                id=len(terms) + 1, kind=InteractionKind.SHIELDING, units="ppm",
                spin_1=index_of[key], reference="absolute",
                label=f"magres ms, {key[0]} {key[1]}",
                amplitude=MatrixAmplitude(matrix=ms)))
    return ParseReport(system=SpinSystem(spins=tuple(spins), interactions=tuple(terms)),
                       warnings=tuple(warnings_))


def filter_by_norm(sys: SpinSystem, threshold: float) -> SpinSystem:
    """Drop interactions with promoted Frobenius norm below ``threshold``.

    Spins are never removed.  Thresholds compose: filtering at a then b
    equals filtering once at max(a, b).
    """
    if threshold < 0.0:
        raise ValueError("threshold must be >= 0")
    kept = tuple(t for t in sys.interactions
                 if frobenius_norm(promote_amplitude(t)) >= threshold)
    return SpinSystem(spins=sys.spins, interactions=kept)
