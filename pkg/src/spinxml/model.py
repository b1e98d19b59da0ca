"""Domain types for spin system documents and document-level validation.

All types are immutable values; operations are pure functions that build
new documents rather than mutating existing ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple

import numpy as np

from . import isotopes
from .amplitudes import (
    RepresentationBundle,
    bundle_from_eigens,
    bundle_from_matrix,
    eigens_from_axrh,
    eigens_from_haeberlen,
    eigens_from_spanskew,
    recompute_views,
)
from .rotations import AngleAxis, DCM, EulerAngles, Rotation, to_dcm


class InteractionKind(str, enum.Enum):
    SHIELDING = "shielding"
    SHIFT = "shift"
    GTENSOR = "gtensor"
    HFC = "hfc"
    QUADRUPOLAR = "quadrupolar"
    EXCHANGE = "exchange"
    JCOUPLING = "jcoupling"
    DIPOLAR = "dipolar"
    SPINROTATION = "spinrotation"
    ZFS = "zfs"


# Kinds coupling two spins; all others act on a single spin.  hfc couples
# one electron (spin_1) to one nucleus (spin_2).
BINARY_KINDS = frozenset({
    InteractionKind.JCOUPLING,
    InteractionKind.DIPOLAR,
    InteractionKind.EXCHANGE,
    InteractionKind.HFC,
})

# Default units per kind as shown in the editor; spinrotation has no table
# entry anywhere and defaults to kHz.
DEFAULT_UNITS: dict[InteractionKind, str] = {
    InteractionKind.SHIELDING: "ppm",
    InteractionKind.SHIFT: "ppm",
    InteractionKind.GTENSOR: "dimensionless",
    InteractionKind.HFC: "Gauss",
    InteractionKind.QUADRUPOLAR: "MHz",
    InteractionKind.EXCHANGE: "MHz",
    InteractionKind.JCOUPLING: "Hz",
    InteractionKind.DIPOLAR: "Hz",
    InteractionKind.SPINROTATION: "kHz",
    InteractionKind.ZFS: "MHz",
}

_FREQ_UNITS = {"Hz", "kHz", "MHz"}
SUPPORTED_UNITS: dict[InteractionKind, frozenset[str]] = {
    InteractionKind.SHIELDING: frozenset({"ppm"}),
    InteractionKind.SHIFT: frozenset({"ppm"}),
    InteractionKind.GTENSOR: frozenset({"dimensionless", "unitless"}),
    InteractionKind.HFC: frozenset(_FREQ_UNITS | {"Gauss", "G", "mT"}),
    InteractionKind.QUADRUPOLAR: frozenset(_FREQ_UNITS),
    InteractionKind.EXCHANGE: frozenset(_FREQ_UNITS),
    InteractionKind.JCOUPLING: frozenset(_FREQ_UNITS),
    InteractionKind.DIPOLAR: frozenset(_FREQ_UNITS),
    InteractionKind.SPINROTATION: frozenset(_FREQ_UNITS),
    InteractionKind.ZFS: frozenset(_FREQ_UNITS),
}


@dataclass(frozen=True)
class Spin:
    """One particle: integer id, isotope string, optional coordinates (A)."""

    id: int
    isotope: str
    coordinates: np.ndarray | None = None
    label: str | None = None

    def __post_init__(self):
        if self.coordinates is not None:
            c = np.asarray(self.coordinates, dtype=float).reshape(3).copy()
            c.flags.writeable = False
            object.__setattr__(self, "coordinates", c)

    @property
    def is_electron(self) -> bool:
        return self.isotope == isotopes.ELECTRON_ISOTOPE

    @property
    def element(self) -> str:
        parsed = isotopes.parse_isotope(self.isotope)
        return parsed[1] if parsed else self.isotope


@dataclass(frozen=True)
class ScalarAmplitude:
    value: float


@dataclass(frozen=True)
class MatrixAmplitude:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float).reshape(3, 3).copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class ExplicitEigenvalues:
    xx: float
    yy: float
    zz: float


@dataclass(frozen=True)
class IsoAnisoAsym:
    iso: float
    aniso: float
    asym: float


@dataclass(frozen=True)
class IsoAxRh:
    iso: float
    ax: float
    rh: float


@dataclass(frozen=True)
class IsoSpanSkew:
    iso: float
    span: float
    skew: float


EigenvalueSpec = ExplicitEigenvalues | IsoAnisoAsym | IsoAxRh | IsoSpanSkew


@dataclass(frozen=True)
class EigenAmplitude:
    """[eigenvalue data] + [orientation data] amplitude; a missing rotation
    means the principal axes coincide with the reference frame."""

    eigenvalues: EigenvalueSpec
    rotation: Rotation | None = None


AmplitudeSpec = ScalarAmplitude | MatrixAmplitude | EigenAmplitude


@dataclass(frozen=True)
class InteractionTerm:
    id: int
    kind: InteractionKind
    spin_1: int
    amplitude: AmplitudeSpec
    units: str | None = None
    spin_2: int | None = None
    label: str | None = None
    reference: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", InteractionKind(self.kind))
        if self.units is None:
            object.__setattr__(self, "units", DEFAULT_UNITS[self.kind])


@dataclass(frozen=True)
class SpinSystem:
    """Ordered collection of spins and interaction terms (the document)."""

    spins: tuple[Spin, ...] = ()
    interactions: tuple[InteractionTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "spins", tuple(self.spins))
        object.__setattr__(self, "interactions", tuple(self.interactions))

    def spin_by_id(self, spin_id: int) -> Spin | None:
        for s in self.spins:
            if s.id == spin_id:
                return s
        return None

    def interaction_by_id(self, term_id: int) -> InteractionTerm | None:
        for t in self.interactions:
            if t.id == term_id:
                return t
        return None

    def with_interaction_replaced(self, term: InteractionTerm) -> "SpinSystem":
        terms = tuple(term if t.id == term.id else t for t in self.interactions)
        return replace(self, interactions=terms)


class Issue(NamedTuple):
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_system(sys: SpinSystem) -> ValidationReport:
    """Check every document invariant; returns a report, never raises.

    Errors: duplicate spin/interaction ids, malformed isotope strings,
    non-finite numbers, dangling spin references, arity violations and
    hfc electron/nucleus role violations.  Unknown isotopes and unusual
    unit strings are warnings so that visualization-only atoms pass.
    """
    errors: list[Issue] = []
    warnings_: list[Issue] = []

    seen_ids: set[int] = set()
    for spin in sys.spins:
        loc = f"spin {spin.id}"
        if spin.id in seen_ids:
            errors.append(Issue(loc, "duplicate spin id"))
        seen_ids.add(spin.id)
        if isotopes.parse_isotope(spin.isotope) is None:
            errors.append(Issue(loc, f"malformed isotope string {spin.isotope!r}"))
        elif isotopes.lookup(spin.isotope) is None:
            warnings_.append(Issue(loc, f"unknown isotope {spin.isotope!r}"))
        if spin.coordinates is not None and not np.all(np.isfinite(spin.coordinates)):
            errors.append(Issue(loc, "non-finite coordinates"))

    spin_ids = {s.id for s in sys.spins}
    seen_term_ids: set[int] = set()
    for term in sys.interactions:
        loc = f"interaction {term.id}"
        if term.id in seen_term_ids:
            errors.append(Issue(loc, "duplicate interaction id"))
        seen_term_ids.add(term.id)
        if term.spin_1 not in spin_ids:
            errors.append(Issue(loc, f"spin_1 references missing spin {term.spin_1}"))
        if term.kind in BINARY_KINDS:
            if term.spin_2 is None:
                errors.append(Issue(loc, f"binary kind {term.kind.value} requires spin_2"))
            elif term.spin_2 not in spin_ids:
                errors.append(Issue(loc, f"spin_2 references missing spin {term.spin_2}"))
        elif term.spin_2 is not None:
            errors.append(Issue(loc, f"unary kind {term.kind.value} forbids spin_2"))
        if term.kind is InteractionKind.HFC:
            s1 = sys.spin_by_id(term.spin_1)
            s2 = sys.spin_by_id(term.spin_2) if term.spin_2 is not None else None
            if s1 is not None and not s1.is_electron:
                errors.append(Issue(loc, "hfc spin_1 must be the electron"))
            if s2 is not None and s2.is_electron:
                errors.append(Issue(loc, "hfc spin_2 must be the nucleus"))
        elif term.kind in (InteractionKind.GTENSOR, InteractionKind.ZFS,
                           InteractionKind.EXCHANGE):
            for sid in (term.spin_1, term.spin_2):
                if sid is None:
                    continue
                s = sys.spin_by_id(sid)
                if s is not None and not s.is_electron:
                    warnings_.append(
                        Issue(loc, f"{term.kind.value} usually acts on electrons; "
                                   f"spin {sid} is {s.isotope}"))
        if term.units not in SUPPORTED_UNITS[term.kind]:
            warnings_.append(
                Issue(loc, f"units {term.units!r} unusual for {term.kind.value}; "
                           "carried verbatim"))
        errors.extend(Issue(loc, msg) for msg in _amplitude_issues(term.amplitude))

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings_))


def _amplitude_issues(amp: AmplitudeSpec) -> list[str]:
    out: list[str] = []
    if isinstance(amp, ScalarAmplitude):
        if not np.isfinite(amp.value):
            out.append("non-finite scalar amplitude")
    elif isinstance(amp, MatrixAmplitude):
        if not np.all(np.isfinite(amp.matrix)):
            out.append("non-finite matrix entries")
    elif isinstance(amp, EigenAmplitude):
        ev = amp.eigenvalues
        if isinstance(ev, IsoSpanSkew):
            if ev.span < 0.0:
                out.append(f"span {ev.span!r} must be >= 0")
            if not -1.0 <= ev.skew <= 1.0:
                out.append(f"skew {ev.skew!r} outside [-1, 1]")
        elif isinstance(ev, IsoAnisoAsym) and not 0.0 <= ev.asym <= 1.0:
            out.append(f"asymmetry {ev.asym!r} outside [0, 1]")
    return out


def resolve_eigenvalues(spec: EigenvalueSpec,
                        kind: InteractionKind | None = None) -> np.ndarray:
    """Resolve an eigenvalue convention to three explicit values.

    Span/skew resolution depends on the tensor type; ``kind`` selects the
    shift ordering for shift terms, shielding ordering otherwise.
    """
    if isinstance(spec, ExplicitEigenvalues):
        return np.array([spec.xx, spec.yy, spec.zz], dtype=float)
    if isinstance(spec, IsoAnisoAsym):
        return eigens_from_haeberlen(spec.iso, spec.aniso, spec.asym)
    if isinstance(spec, IsoAxRh):
        return eigens_from_axrh(spec.iso, spec.ax, spec.rh)
    if isinstance(spec, IsoSpanSkew):
        sskind = "shift" if kind is InteractionKind.SHIFT else "shielding"
        return eigens_from_spanskew(spec.iso, spec.span, spec.skew, sskind)
    raise TypeError(f"not an eigenvalue spec: {spec!r}")


def promote_amplitude(term: InteractionTerm) -> np.ndarray:
    """Normal form of a term's amplitude as a full 3x3 matrix.

    Scalars become s * identity; matrices pass through unchanged; eigenvalue
    conventions are resolved and rotated, R diag(l) R^T.  Degenerate or
    out-of-range convention parameters raise the amplitudes module errors.
    """
    amp = term.amplitude
    if isinstance(amp, ScalarAmplitude):
        return np.eye(3) * amp.value
    if isinstance(amp, MatrixAmplitude):
        return amp.matrix.copy()
    if isinstance(amp, EigenAmplitude):
        evals = resolve_eigenvalues(amp.eigenvalues, term.kind)
        if amp.rotation is None:
            return np.diag(evals)
        r = to_dcm(amp.rotation)
        return r @ np.diag(evals) @ r.T
    raise TypeError(f"not an amplitude: {amp!r}")


def make_system(spins: Iterable[Spin],
                interactions: Iterable[InteractionTerm]) -> SpinSystem:
    return SpinSystem(spins=tuple(spins), interactions=tuple(interactions))


def bundle_for_term(term: InteractionTerm) -> RepresentationBundle:
    """Full representation bundle of a term's amplitude.

    Shift terms use the shift span/skew ordering, everything else the
    shielding one.
    """
    sskind = "shift" if term.kind is InteractionKind.SHIFT else "shielding"
    amp = term.amplitude
    if isinstance(amp, ScalarAmplitude):
        return bundle_from_eigens(np.full(3, amp.value), np.eye(3), sskind)
    if isinstance(amp, MatrixAmplitude):
        return bundle_from_matrix(amp.matrix, sskind)
    evals = resolve_eigenvalues(amp.eigenvalues, term.kind)
    rot = np.eye(3) if amp.rotation is None else to_dcm(amp.rotation)
    return bundle_from_eigens(evals, rot, sskind)


def apply_edit(term: InteractionTerm, edited: str,
               value) -> tuple[InteractionTerm, RepresentationBundle]:
    """Edit one representation of a term and re-store its amplitude.

    Matrix and spherical edits store the full matrix; eigen-side edits
    store explicit eigenvalues plus the rotation in the convention the
    user edited, unless the tensor carries an antisymmetric part, which
    only the matrix form can hold.
    """
    bundle = recompute_views(bundle_for_term(term), edited, value)
    anti = np.max(np.abs(bundle.matrix - bundle.matrix.T))
    if edited in ("matrix", "spherical") \
            or anti > 1e-12 * max(1.0, float(np.max(np.abs(bundle.matrix)))):
        amp: AmplitudeSpec = MatrixAmplitude(matrix=bundle.matrix)
    else:
        eigenvalues = ExplicitEigenvalues(*(float(v) for v in bundle.eigenvalues))
        if edited == "euler":
            rot: Rotation = EulerAngles(*(float(v) for v in value))
        elif edited == "angle_axis_angle":
            rot = AngleAxis(angle=float(value), axis=bundle.angle_axis.axis)
        elif isinstance(term.amplitude, EigenAmplitude) and term.amplitude.rotation is not None:
            rot = term.amplitude.rotation
        else:
            rot = DCM(bundle.dcm)
        amp = EigenAmplitude(eigenvalues=eigenvalues, rotation=rot)
    new_term = InteractionTerm(id=term.id, kind=term.kind, units=term.units,
                               spin_1=term.spin_1, spin_2=term.spin_2,
                               label=term.label, reference=term.reference,
                               amplitude=amp)
    return new_term, bundle
