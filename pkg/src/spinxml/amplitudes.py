"""Interaction amplitude conventions and the multi-view tensor bundle.

Converts among the eigenvalue conventions used to report 3x3 interaction
tensors, decomposes matrices into irreducible spherical components, and
keeps a consistent bundle of every representation for interactive editing.

Fixed formulas (printed next to exported values, see the exporters module):

* Haeberlen: with the assignment |l_zz - iso| >= |l_xx - iso| >= |l_yy - iso|,
  iso = (l1 + l2 + l3)/3, zeta = l_zz - iso, anisotropy = (3/2) zeta
  = l_zz - (l_xx + l_yy)/2, asymmetry = (l_yy - l_xx)/zeta.
* Axiality/rhombicity: ax = (3/2)(l_zz - iso), rh = (l_xx - l_yy)/2.
* Span/skew (Maryland): shielding orders s11 <= s22 <= s33 with
  span = s33 - s11 and skew = 3 (iso - s22)/span; shift orders
  d11 >= d22 >= d33 with span = d11 - d33 and skew = 3 (d22 - iso)/span.
  The same eigenvalue set therefore flips the sign of the skew between the
  two tensor types.
* Irreducible spherical components, normalized so that the total squared
  magnitude of all components equals the squared Frobenius norm, and so
  that rank-2 components transform as t(R A R^T) = D(R) t(A) with the
  wigner_d2 matrix of the rotations module:
    T00    = (m_xx + m_yy + m_zz)/sqrt(3)
    T2,0   = (2 m_zz - m_xx - m_yy)/sqrt(6)
    T2,+-1 = -+((m_xz + m_zx) -+ i (m_yz + m_zy))/2
    T2,+-2 =   ((m_xx - m_yy) -+ i (m_xy + m_yx))/2
    T1,0   = (m_xy - m_yx)/sqrt(2)
    T1,+-1 = -+((m_zx - m_xz) +- i (m_zy - m_yz))/2

Degeneracy threshold for "undefined" convention parameters is 1e-12
relative to the largest absolute eigenvalue.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .rotations import (
    AngleAxis,
    DCM,
    EulerAngles,
    Quaternion,
    Rotation,
    from_dcm,
    to_dcm,
    wigner_d2,
)

DEGENERACY_REL_TOL = 1e-12
CONJUGATION_TOL = 1e-9

ORDERINGS = ("haeberlen", "ascending", "descending")

EDITABLE_FIELDS = ("matrix", "eigenvalues", "spherical", "euler", "angle_axis_angle")
READONLY_FIELDS = ("quaternion", "dcm", "wigner", "haeberlen", "axrh", "spanskew",
                   "eigenvectors", "angle_axis_axis")


class DegenerateConventionError(ValueError):
    """Convention parameter is undefined for a degenerate eigenvalue set."""


class InvalidComponentsError(ValueError):
    """Spherical components violate the real-matrix conjugation symmetry."""


class Haeberlen(NamedTuple):
    iso: float
    aniso: float
    asym: float


class AxRh(NamedTuple):
    iso: float
    ax: float
    rh: float


class SpanSkew(NamedTuple):
    iso: float
    span: float
    skew: float


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues plus the proper rotation carrying the principal axis
    frame onto the reference frame (columns are eigenvectors)."""

    eigenvalues: np.ndarray
    rotation: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.rotation @ np.diag(self.eigenvalues) @ self.rotation.T


@dataclass(frozen=True)
class SphericalComponents:
    """Irreducible spherical components; rank1/rank2 indexed m = -l..+l."""

    rank0: complex
    rank1: np.ndarray
    rank2: np.ndarray

    def __post_init__(self):
        r1 = np.asarray(self.rank1, dtype=complex).reshape(3).copy()
        r2 = np.asarray(self.rank2, dtype=complex).reshape(5).copy()
        r1.flags.writeable = False
        r2.flags.writeable = False
        object.__setattr__(self, "rank0", complex(self.rank0))
        object.__setattr__(self, "rank1", r1)
        object.__setattr__(self, "rank2", r2)


def frobenius_norm(m: np.ndarray) -> float:
    """sqrt of the sum of squared entries."""
    m = np.asarray(m, dtype=float)
    return float(np.sqrt(np.sum(m * m)))


def _as_matrix(m) -> np.ndarray:
    return np.asarray(m, dtype=float).reshape(3, 3)


def _haeberlen_assignment(evals: np.ndarray) -> tuple[float, float, float]:
    """Return (l_xx, l_yy, l_zz) per |l_zz-iso| >= |l_xx-iso| >= |l_yy-iso|.

    Stable on ties: equal deviations keep input order.
    """
    iso = float(np.mean(evals))
    order = np.argsort(-np.abs(evals - iso), kind="stable")
    zz, xx, yy = (float(evals[i]) for i in order)
    return xx, yy, zz


def eigens_from_matrix(m, ordering: str = "ascending") -> EigenSystem:
    """Eigendecomposition of the symmetric part of ``m``.

    The antisymmetric part, if any, is dropped with a warning (it lives in
    the rank-1 spherical components only).  ``ordering`` is "haeberlen",
    "ascending" or "descending"; for "haeberlen" the returned order is
    (l_xx, l_yy, l_zz).  The rotation is made proper by flipping the last
    eigenvector when needed; an exactly diagonal input keeps the coordinate
    axes (stable ties), so isotropic tensors return the identity.
    """
    if ordering not in ORDERINGS:
        raise ValueError(f"unknown ordering {ordering!r}")
    m = _as_matrix(m)
    sym = (m + m.T) / 2.0
    anti = m - sym
    if np.max(np.abs(anti)) > 1e-12 * max(1.0, np.max(np.abs(m))):
        warnings.warn("antisymmetric part dropped by eigendecomposition",
                      stacklevel=2)
    if np.count_nonzero(sym - np.diag(np.diagonal(sym))) == 0:
        evals = np.diagonal(sym).astype(float).copy()
        evecs = np.eye(3)
    else:
        evals, evecs = np.linalg.eigh(sym)
    if evals[0] == evals[1] == evals[2]:
        order = np.array([0, 1, 2])   # fully isotropic: keep the axes
    elif ordering == "ascending":
        order = np.argsort(evals, kind="stable")
    elif ordering == "descending":
        order = np.argsort(-evals, kind="stable")
    else:
        iso = float(np.mean(evals))
        desc = np.argsort(-np.abs(evals - iso), kind="stable")
        order = np.array([desc[1], desc[2], desc[0]])  # (xx, yy, zz)
    evals = evals[order]
    evecs = evecs[:, order].copy()
    if np.linalg.det(evecs) < 0.0:
        evecs[:, 2] = -evecs[:, 2]
    evals = np.asarray(evals, dtype=float)
    evals.flags.writeable = False
    evecs.flags.writeable = False
    return EigenSystem(eigenvalues=evals, rotation=evecs)


def haeberlen_from_eigens(evals) -> Haeberlen:
    """(iso, anisotropy, asymmetry) of an eigenvalue triple.

    Raises DegenerateConventionError when the tensor is isotropic (zeta = 0
    within 1e-12 relative), where the asymmetry is undefined.
    """
    evals = np.asarray(evals, dtype=float).reshape(3)
    xx, yy, zz = _haeberlen_assignment(evals)
    iso = float(np.mean(evals))
    zeta = zz - iso
    if abs(zeta) <= DEGENERACY_REL_TOL * np.max(np.abs(evals), initial=0.0):
        raise DegenerateConventionError("isotropic eigenvalues: asymmetry undefined")
    return Haeberlen(iso=iso, aniso=1.5 * zeta, asym=(yy - xx) / zeta)


def eigens_from_haeberlen(iso: float, aniso: float, asym: float) -> np.ndarray:
    """Inverse of haeberlen_from_eigens; returns (l_xx, l_yy, l_zz)."""
    if not 0.0 <= asym <= 1.0:
        raise ValueError(f"asymmetry {asym!r} outside [0, 1]")
    zeta = aniso * 2.0 / 3.0
    return np.array([
        iso - zeta * (1.0 + asym) / 2.0,
        iso - zeta * (1.0 - asym) / 2.0,
        iso + zeta,
    ])


def axrh_from_eigens(evals) -> AxRh:
    """(iso, axiality, rhombicity); defined for any eigenvalue triple."""
    evals = np.asarray(evals, dtype=float).reshape(3)
    xx, yy, zz = _haeberlen_assignment(evals)
    iso = float(np.mean(evals))
    return AxRh(iso=iso, ax=1.5 * (zz - iso), rh=(xx - yy) / 2.0)


def eigens_from_axrh(iso: float, ax: float, rh: float) -> np.ndarray:
    """Inverse of axrh_from_eigens; returns (l_xx, l_yy, l_zz)."""
    return np.array([
        iso - ax / 3.0 + rh,
        iso - ax / 3.0 - rh,
        iso + 2.0 * ax / 3.0,
    ])


def spanskew_from_eigens(evals, kind: str = "shielding") -> SpanSkew:
    """(iso, span, skew) in the Maryland convention for ``kind``.

    The output does not depend on the input eigenvalue order.  Raises
    DegenerateConventionError for isotropic input (span = 0).
    """
    if kind not in ("shielding", "shift"):
        raise ValueError(f"span/skew kind must be shielding or shift, got {kind!r}")
    evals = np.sort(np.asarray(evals, dtype=float).reshape(3))
    lo, mid, hi = (float(v) for v in evals)
    span = hi - lo
    if span <= DEGENERACY_REL_TOL * np.max(np.abs(evals), initial=0.0):
        raise DegenerateConventionError("isotropic eigenvalues: skew undefined")
    iso = (lo + mid + hi) / 3.0
    skew = 3.0 * (iso - mid) / span
    if kind == "shift":
        skew = -skew
    return SpanSkew(iso=iso, span=span, skew=skew)


def eigens_from_spanskew(iso: float, span: float, skew: float,
                         kind: str = "shielding") -> np.ndarray:
    """Inverse of spanskew_from_eigens.

    Returns eigenvalues in the kind's own ordering: ascending
    (s11, s22, s33) for shielding, descending (d11, d22, d33) for shift.
    """
    if kind not in ("shielding", "shift"):
        raise ValueError(f"span/skew kind must be shielding or shift, got {kind!r}")
    if span < 0.0:
        raise ValueError(f"span {span!r} must be >= 0")
    if not -1.0 <= skew <= 1.0:
        raise ValueError(f"skew {skew!r} outside [-1, 1]")
    sgn = 1.0 if kind == "shielding" else -1.0
    mid = iso - sgn * skew * span / 3.0
    hi = (3.0 * iso - mid + span) / 2.0
    lo = (3.0 * iso - mid - span) / 2.0
    if kind == "shielding":
        return np.array([lo, mid, hi])
    return np.array([hi, mid, lo])


_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT6 = math.sqrt(6.0)


def spherical_from_matrix(m) -> SphericalComponents:
    """Irreducible spherical components of a real 3x3 matrix.

    Rank 0 carries the trace, rank 1 the antisymmetric part and rank 2 the
    symmetric traceless part; the normalization preserves the Frobenius
    norm (sum over l, m of |T_lm|^2 equals the squared Frobenius norm).
    """
    m = _as_matrix(m)
    rank0 = complex(np.trace(m) / _SQRT3)
    rank1 = np.array([
        ((m[2, 0] - m[0, 2]) - 1j * (m[2, 1] - m[1, 2])) / 2.0,   # m = -1
        (m[0, 1] - m[1, 0]) / _SQRT2,                             # m = 0
        -((m[2, 0] - m[0, 2]) + 1j * (m[2, 1] - m[1, 2])) / 2.0,  # m = +1
    ])
    rank2 = np.array([
        ((m[0, 0] - m[1, 1]) + 1j * (m[0, 1] + m[1, 0])) / 2.0,   # m = -2
        ((m[0, 2] + m[2, 0]) + 1j * (m[1, 2] + m[2, 1])) / 2.0,   # m = -1
        (2.0 * m[2, 2] - m[0, 0] - m[1, 1]) / _SQRT6,             # m = 0
        -((m[0, 2] + m[2, 0]) - 1j * (m[1, 2] + m[2, 1])) / 2.0,  # m = +1
        ((m[0, 0] - m[1, 1]) - 1j * (m[0, 1] + m[1, 0])) / 2.0,   # m = +2
    ])
    return SphericalComponents(rank0=rank0, rank1=rank1, rank2=rank2)


def _conjugation_defect(s: SphericalComponents) -> float:
    worst = abs(s.rank0.imag)
    r1, r2 = s.rank1, s.rank2
    worst = max(worst, abs(r1[1].imag), abs(r2[2].imag))
    worst = max(worst, abs(r1[0] + np.conj(r1[2])))
    worst = max(worst, abs(r2[1] + np.conj(r2[3])))
    worst = max(worst, abs(r2[0] - np.conj(r2[4])))
    return float(worst)


def matrix_from_spherical(s: SphericalComponents) -> np.ndarray:
    """Reconstruct the real 3x3 matrix from spherical components.

    Raises InvalidComponentsError when the components violate the
    real-matrix conjugation symmetry T_{l,-m} = (-1)^m conj(T_{l,m})
    beyond 1e-9 (relative to the largest component).
    """
    scale = max(1.0, abs(s.rank0),
                float(np.max(np.abs(s.rank1))), float(np.max(np.abs(s.rank2))))
    if _conjugation_defect(s) > CONJUGATION_TOL * scale:
        raise InvalidComponentsError(
            "components violate conjugation symmetry for a real matrix")
    iso = s.rank0.real / _SQRT3
    szz = s.rank2[2].real * _SQRT6 / 3.0
    dxx_yy = (s.rank2[4] + s.rank2[0]).real           # m_xx - m_yy
    sxy = (s.rank2[0] - s.rank2[4]).imag / 2.0        # (m_xy + m_yx)/2
    sxz = (s.rank2[1] - s.rank2[3]).real / 2.0        # (m_xz + m_zx)/2
    syz = (s.rank2[1] + s.rank2[3]).imag / 2.0        # (m_yz + m_zy)/2
    sxx = (-szz + dxx_yy) / 2.0
    syy = (-szz - dxx_yy) / 2.0
    axy = s.rank1[1].real * _SQRT2 / 2.0              # (m_xy - m_yx)/2
    axz = -(s.rank1[0] - s.rank1[2]).real / 2.0       # (m_xz - m_zx)/2
    ayz = (s.rank1[0] + s.rank1[2]).imag / 2.0        # (m_yz - m_zy)/2
    return np.array([
        [iso + sxx, sxy + axy, sxz + axz],
        [sxy - axy, iso + syy, syz + ayz],
        [sxz - axz, syz - ayz, iso + szz],
    ])


@dataclass(frozen=True)
class RepresentationBundle:
    """Consistent snapshot of every representation of one tensor.

    The eigen-side views (eigenvalues, eigenvectors, rotations, Wigner
    matrix) describe the symmetric part of ``matrix``; any antisymmetric
    part is carried by ``matrix`` and the rank-1 spherical components.
    ``haeberlen`` and ``spanskew`` are None when the corresponding
    convention is undefined (degenerate eigenvalues).
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    euler: EulerAngles
    angle_axis: AngleAxis
    quaternion: Quaternion
    dcm: np.ndarray
    spherical: SphericalComponents
    haeberlen: Haeberlen | None
    axrh: AxRh
    spanskew: SpanSkew | None
    wigner: np.ndarray
    spanskew_kind: str = "shielding"


def _bundle(matrix: np.ndarray, evals: np.ndarray, rot: np.ndarray,
            spanskew_kind: str) -> RepresentationBundle:
    matrix = matrix.copy()
    evals = np.asarray(evals, dtype=float).reshape(3).copy()
    rot = np.asarray(rot, dtype=float).reshape(3, 3).copy()
    try:
        haeb = haeberlen_from_eigens(evals)
    except DegenerateConventionError:
        haeb = None
    try:
        ss = spanskew_from_eigens(evals, spanskew_kind)
    except DegenerateConventionError:
        ss = None
    for a in (matrix, evals, rot):
        a.flags.writeable = False
    return RepresentationBundle(
        matrix=matrix,
        eigenvalues=evals,
        eigenvectors=rot,
        euler=from_dcm(rot, "euler_angles"),
        angle_axis=from_dcm(rot, "angle_axis"),
        quaternion=from_dcm(rot, "quaternion"),
        dcm=rot,
        spherical=spherical_from_matrix(matrix),
        haeberlen=haeb,
        axrh=axrh_from_eigens(evals),
        spanskew=ss,
        wigner=wigner_d2(rot),
        spanskew_kind=spanskew_kind,
    )


def bundle_from_matrix(m, spanskew_kind: str = "shielding") -> RepresentationBundle:
    """Build a bundle from a full 3x3 matrix (ascending eigenvalue order)."""
    m = _as_matrix(m)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        es = eigens_from_matrix(m, "ascending")
    return _bundle(m, es.eigenvalues, es.rotation, spanskew_kind)


def bundle_from_eigens(evals, rotation: Rotation | np.ndarray,
                       spanskew_kind: str = "shielding") -> RepresentationBundle:
    """Build a bundle from eigenvalues and a principal-axis rotation."""
    evals = np.asarray(evals, dtype=float).reshape(3)
    rot = to_dcm(rotation)
    matrix = rot @ np.diag(evals) @ rot.T
    return _bundle(matrix, evals, rot, spanskew_kind)


def recompute_views(current: RepresentationBundle, edited: str,
                    value) -> RepresentationBundle:
    """Apply one edit and return a fully recomputed consistent bundle.

    ``edited`` must be one of matrix, eigenvalues, spherical, euler,
    angle_axis_angle; the remaining views are derived and not editable.
    Editing eigenvalues preserves the current orientation; editing the
    orientation preserves the eigenvalues (and in both cases the current
    antisymmetric part of the matrix); editing the matrix or the spherical
    components regenerates both.
    """
    if edited not in EDITABLE_FIELDS:
        raise ValueError(
            f"field {edited!r} is not editable (editable: {', '.join(EDITABLE_FIELDS)})")
    kind = current.spanskew_kind
    if edited == "matrix":
        return bundle_from_matrix(value, kind)
    if edited == "spherical":
        if not isinstance(value, SphericalComponents):
            raise TypeError("spherical edit requires SphericalComponents")
        return bundle_from_matrix(matrix_from_spherical(value), kind)
    anti = (current.matrix - current.matrix.T) / 2.0
    if edited == "eigenvalues":
        evals = np.asarray(value, dtype=float).reshape(3)
        rot = current.dcm
    elif edited == "euler":
        a, b, g = (float(v) for v in value)
        evals = current.eigenvalues
        rot = to_dcm(EulerAngles(a, b, g))
    else:  # angle_axis_angle
        evals = current.eigenvalues
        rot = to_dcm(AngleAxis(angle=float(value), axis=current.angle_axis.axis))
    matrix = rot @ np.diag(evals) @ rot.T + anti
    return _bundle(matrix, evals, rot, kind)
