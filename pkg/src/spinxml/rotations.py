"""Rotation conventions and conversions.

Four interchangeable descriptions of a proper rotation are supported:
Euler angles, angle-axis, unit quaternion and direction cosine matrix (DCM).
The fixed conventions are:

* Euler angles: ZYZ, active (counterclockwise about fixed right-handed
  axes), in degrees.  R(alpha, beta, gamma) = Rz(alpha) Ry(beta) Rz(gamma).
* Quaternions: (w, x, y, z) with w first; canonical form has w >= 0, with
  w = 0 ties broken so the first nonzero of (x, y, z) is positive.
* Angle-axis: angle in degrees, unit axis; canonical angle in [0, 180];
  zero rotation canonicalizes the axis to (0, 0, 1); at 180 degrees the
  axis sign makes its first nonzero component positive.
* DCM: proper orthogonal 3x3 matrix, v_rotated = R v.

Validation tolerances (unit norm, orthogonality: 1e-9; Euler singularity:
1e-10) are fixed constants, not configurable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ORTHONORMAL_TOL = 1e-9
GIMBAL_TOL = 1e-10

EULER_CONVENTION_NOTE = "euler_angles: ZYZ active rotation, degrees; quaternion: w x y z"


class InvalidRotationError(ValueError):
    """Rotation data violates its convention beyond tolerance."""


@dataclass(frozen=True)
class EulerAngles:
    """ZYZ active Euler angles in degrees."""

    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class AngleAxis:
    """Rotation by ``angle`` degrees about a unit ``axis``."""

    angle: float
    axis: np.ndarray

    def __post_init__(self):
        ax = np.asarray(self.axis, dtype=float).reshape(3).copy()
        ax.flags.writeable = False
        object.__setattr__(self, "axis", ax)


@dataclass(frozen=True)
class Quaternion:
    """Unit quaternion, scalar part first."""

    w: float
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])


@dataclass(frozen=True)
class DCM:
    """Direction cosine matrix (proper orthogonal, det +1)."""

    matrix: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float).reshape(3, 3).copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


Rotation = EulerAngles | AngleAxis | Quaternion | DCM

CONVENTION_TAGS = ("euler_angles", "angle_axis", "quaternion", "dcm")


def identity_rotation() -> DCM:
    return DCM(np.eye(3))


def _rz(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _ry(b: float) -> np.ndarray:
    c, s = math.cos(b), math.sin(b)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _det3(m: np.ndarray) -> float:
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def _check_dcm(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float).reshape(3, 3)
    if not np.all(np.isfinite(m)):
        raise InvalidRotationError("DCM contains non-finite entries")
    if np.max(np.abs(m.T @ m - np.eye(3))) > ORTHONORMAL_TOL:
        raise InvalidRotationError("matrix is not orthogonal within 1e-9")
    if abs(_det3(m) - 1.0) > ORTHONORMAL_TOL:
        raise InvalidRotationError("matrix determinant is not +1 within 1e-9")
    return m


def to_dcm(r: Rotation | np.ndarray) -> np.ndarray:
    """Convert any rotation description to its 3x3 rotation matrix.

    Raises InvalidRotationError when a quaternion or axis norm deviates from
    unity by more than 1e-9, or a DCM is not proper orthogonal within 1e-9.
    """
    if isinstance(r, np.ndarray):
        return _check_dcm(r)
    if isinstance(r, DCM):
        return _check_dcm(r.matrix)
    if isinstance(r, EulerAngles):
        al, be, ga = (math.radians(v) for v in (r.alpha, r.beta, r.gamma))
        return _rz(al) @ _ry(be) @ _rz(ga)
    if isinstance(r, AngleAxis):
        ax = np.asarray(r.axis, dtype=float)
        n = np.linalg.norm(ax)
        if abs(n - 1.0) > ORTHONORMAL_TOL:
            raise InvalidRotationError(f"angle-axis axis norm {n!r} is not 1 within 1e-9")
        ax = ax / n
        th = math.radians(r.angle)
        c, s = math.cos(th), math.sin(th)
        kx, ky, kz = ax
        kcross = np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])
        return c * np.eye(3) + s * kcross + (1.0 - c) * np.outer(ax, ax)
    if isinstance(r, Quaternion):
        q = np.array([r.w, r.x, r.y, r.z], dtype=float)
        n = np.linalg.norm(q)
        if abs(n - 1.0) > ORTHONORMAL_TOL:
            raise InvalidRotationError(f"quaternion norm {n!r} is not 1 within 1e-9")
        w, x, y, z = q / n
        return np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])
    raise TypeError(f"not a rotation: {r!r}")


def _dcm_to_euler(m: np.ndarray) -> EulerAngles:
    # ZYZ extraction; on gimbal lock (|sin beta| < 1e-10) gamma is set to 0
    # and the whole z-rotation folds into alpha.
    cb = min(1.0, max(-1.0, m[2, 2]))
    beta = math.acos(cb)
    if abs(math.sin(beta)) < GIMBAL_TOL:
        if cb > 0.0:
            beta = 0.0
            alpha = math.atan2(m[1, 0], m[0, 0])
        else:
            beta = math.pi
            alpha = math.atan2(-m[1, 0], -m[0, 0])
        gamma = 0.0
    else:
        alpha = math.atan2(m[1, 2], m[0, 2])
        gamma = math.atan2(m[2, 1], -m[2, 0])
    return EulerAngles(
        alpha=math.degrees(alpha) % 360.0,
        beta=math.degrees(beta),
        gamma=math.degrees(gamma) % 360.0,
    )


def _dcm_to_quaternion(m: np.ndarray) -> Quaternion:
    # Shepperd's method: pick the largest pivot for numerical stability.
    t = np.trace(m)
    choices = [t, m[0, 0], m[1, 1], m[2, 2]]
    i = int(np.argmax(choices))
    if i == 0:
        r = math.sqrt(1.0 + t)
        w = 0.5 * r
        x = 0.5 * (m[2, 1] - m[1, 2]) / r
        y = 0.5 * (m[0, 2] - m[2, 0]) / r
        z = 0.5 * (m[1, 0] - m[0, 1]) / r
    elif i == 1:
        r = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2])
        x = 0.5 * r
        w = 0.5 * (m[2, 1] - m[1, 2]) / r
        y = 0.5 * (m[0, 1] + m[1, 0]) / r
        z = 0.5 * (m[0, 2] + m[2, 0]) / r
    elif i == 2:
        r = math.sqrt(1.0 - m[0, 0] + m[1, 1] - m[2, 2])
        y = 0.5 * r
        w = 0.5 * (m[0, 2] - m[2, 0]) / r
        x = 0.5 * (m[0, 1] + m[1, 0]) / r
        z = 0.5 * (m[1, 2] + m[2, 1]) / r
    else:
        r = math.sqrt(1.0 - m[0, 0] - m[1, 1] + m[2, 2])
        z = 0.5 * r
        w = 0.5 * (m[1, 0] - m[0, 1]) / r
        x = 0.5 * (m[0, 2] + m[2, 0]) / r
        y = 0.5 * (m[1, 2] + m[2, 1]) / r
    q = np.array([w, x, y, z])
    q = q / np.linalg.norm(q)
    # Canonical sign: w >= 0; exact w == 0 ties resolved by the first
    # nonzero vector component.
    if q[0] < 0.0:
        q = -q
    elif q[0] == 0.0:
        for v in q[1:]:
            if v != 0.0:
                if v < 0.0:
                    q = -q
                break
    return Quaternion(*(float(v) for v in q))


def _dcm_to_angle_axis(m: np.ndarray) -> AngleAxis:
    ct = min(1.0, max(-1.0, (np.trace(m) - 1.0) / 2.0))
    theta = math.acos(ct)
    if theta < 1e-12:
        return AngleAxis(angle=0.0, axis=np.array([0.0, 0.0, 1.0]))
    if math.pi - theta < 1e-6:
        # Near 180 degrees the skew part vanishes; recover the axis from
        # B = (R + I)/2 = n n^T.
        b = (m + np.eye(3)) / 2.0
        d = np.sqrt(np.clip(np.diag(b), 0.0, None))
        k = int(np.argmax(d))
        ax = b[:, k] / d[k]
        ax = ax / np.linalg.norm(ax)
        for v in ax:
            if v != 0.0:
                if v < 0.0:
                    ax = -ax
                break
        return AngleAxis(angle=math.degrees(theta), axis=ax)
    ax = np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
    ax = ax / (2.0 * math.sin(theta))
    ax = ax / np.linalg.norm(ax)
    return AngleAxis(angle=math.degrees(theta), axis=ax)


def from_dcm(m: np.ndarray | DCM, target: str) -> Rotation:
    """Convert a rotation matrix to the ``target`` convention in canonical form.

    ``target`` is one of "euler_angles", "angle_axis", "quaternion", "dcm".
    Raises InvalidRotationError for an improper or non-orthogonal matrix.
    """
    if isinstance(m, DCM):
        m = m.matrix
    m = _check_dcm(m)
    if target == "dcm":
        return DCM(m)
    if target == "euler_angles":
        return _dcm_to_euler(m)
    if target == "quaternion":
        return _dcm_to_quaternion(m)
    if target == "angle_axis":
        return _dcm_to_angle_axis(m)
    raise ValueError(f"unknown rotation convention {target!r}")


def compose(r1: Rotation | np.ndarray, r2: Rotation | np.ndarray) -> np.ndarray:
    """Matrix of applying r2 first, then r1: to_dcm(r1) @ to_dcm(r2)."""
    return to_dcm(r1) @ to_dcm(r2)


def inverse(r: Rotation | np.ndarray) -> np.ndarray:
    """Inverse rotation matrix (transpose)."""
    return to_dcm(r).T.copy()


_WIGNER_MS = (-2, -1, 0, 1, 2)
_FACT = [1, 1, 2, 6, 24]


def _little_d2(mp: int, m: int, beta: float) -> float:
    # Rank-2 reduced Wigner matrix element d^2_{mp,m}(beta), Varshalovich
    # convention: d^l_{mp,m} = sqrt((l+mp)!(l-mp)!(l+m)!(l-m)!) *
    #   sum_k (-1)^(mp-m+k) cos(b/2)^(2l+m-mp-2k) sin(b/2)^(mp-m+2k)
    #         / ((l+m-k)! k! (l-k-mp)! (k+mp-m)!)
    l = 2
    kmin = max(0, m - mp)
    kmax = min(l + m, l - mp)
    pref = math.sqrt(_FACT[l + mp] * _FACT[l - mp] * _FACT[l + m] * _FACT[l - m])
    c, s = math.cos(beta / 2.0), math.sin(beta / 2.0)
    tot = 0.0
    for k in range(kmin, kmax + 1):
        den = _FACT[l + m - k] * _FACT[k] * _FACT[l - k - mp] * _FACT[k + mp - m]
        tot += (-1) ** (mp - m + k) / den * c ** (2 * l + m - mp - 2 * k) * s ** (mp - m + 2 * k)
    return pref * tot


def wigner_d2(r: Rotation | np.ndarray) -> np.ndarray:
    """Second-rank Wigner rotation matrix of ``r``.

    Returns the 5x5 complex unitary matrix D^2_{m'm}(alpha, beta, gamma) =
    exp(-i m' alpha) d^2_{m'm}(beta) exp(-i m gamma), rows and columns
    indexed by m', m = -2..+2, with the Euler angles extracted from ``r``.
    Irreducible rank-2 spherical components (see the amplitudes module)
    transform as t(R A R^T) = D(R) t(A).
    """
    e = _dcm_to_euler(to_dcm(r))
    al, be, ga = (math.radians(v) for v in (e.alpha, e.beta, e.gamma))
    out = np.empty((5, 5), dtype=complex)
    for i, mp in enumerate(_WIGNER_MS):
        for j, m in enumerate(_WIGNER_MS):
            out[i, j] = (
                np.exp(-1j * mp * al) * _little_d2(mp, m, be) * np.exp(-1j * m * ga)
            )
    return out


def rotations_equal(a: Rotation | np.ndarray, b: Rotation | np.ndarray,
                    tol: float = 1e-9) -> bool:
    """True when two rotation descriptions denote the same matrix within tol."""
    return bool(np.max(np.abs(to_dcm(a) - to_dcm(b))) <= tol)
