"""Physics and render geometry derived from a spin system.

Dipolar coupling tensors are computed from particle coordinates, bonds from
a plain distance check, and interaction glyphs (ellipsoids, lines, coils)
are assembled into a render-ready scene.  The scene carries raw magnitudes;
color mapping and tessellation belong to the presentation layer.

Glyph selection per view mode:

* NMR: shielding and shift ellipsoids, J-coupling lines, quadrupolar
  ellipsoids, all centered on nuclei.
* EPR: g-tensor and zero-field-splitting ellipsoids on electrons,
  hyperfine ellipsoids on the coupled nucleus, exchange coils between
  electrons.

Electrons have no physical coordinates; they are laid out evenly on a
horizontal strip 1.5 bounding-box heights below the molecule.  These
synthetic positions are presentation-only and never enter dipolar math.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import isotopes
from .amplitudes import eigens_from_matrix, frobenius_norm
from .model import InteractionKind, InteractionTerm, Spin, SpinSystem, promote_amplitude
from .rotations import Quaternion, from_dcm

DEFAULT_BOND_THRESHOLD = 1.8  # Angstrom

ELLIPSOID_ROLE: dict[InteractionKind, str] = {
    InteractionKind.SHIELDING: "shielding",
    InteractionKind.SHIFT: "shielding",
    InteractionKind.HFC: "hfc",
    InteractionKind.QUADRUPOLAR: "quadrupolar",
    InteractionKind.GTENSOR: "gtensor",
    InteractionKind.ZFS: "zfs",
}

NMR_KINDS = frozenset({InteractionKind.SHIELDING, InteractionKind.SHIFT,
                       InteractionKind.JCOUPLING, InteractionKind.QUADRUPOLAR})
EPR_KINDS = frozenset({InteractionKind.GTENSOR, InteractionKind.HFC,
                       InteractionKind.EXCHANGE, InteractionKind.ZFS})

DEFAULT_SCALES = {"shielding": 1.0, "hfc": 1.0, "quadrupolar": 1.0,
                  "gtensor": 1.0, "zfs": 1.0}


def dipolar_tensor(spin_a: Spin, spin_b: Spin,
                   isotope_table: dict[str, isotopes.IsotopeRecord] | None = None
                   ) -> np.ndarray:
    """Dipole-dipole coupling tensor between two located spins, in Hz.

    D = -(mu0 / 4 pi) (gamma_a gamma_b hbar / 2 pi) (3 n n^T - I) / r^3
    with n the unit inter-spin vector and r their distance.  The result is
    symmetric, traceless and axial about n by construction.
    """
    table = isotope_table or isotopes.ISOTOPES
    if spin_a.coordinates is None or spin_b.coordinates is None:
        raise ValueError("both spins need coordinates for a dipolar tensor")
    gammas = []
    for s in (spin_a, spin_b):
        rec = table.get(s.isotope)
        if rec is None or not rec.magnetic:
            raise ValueError(f"spin {s.id} ({s.isotope}) is not magnetic")
        gammas.append(rec.gamma)
    rvec = (spin_b.coordinates - spin_a.coordinates) * 1e-10  # Angstrom -> m
    r = float(np.linalg.norm(rvec))
    if r == 0.0:
        raise ValueError("coincident coordinates")
    n = rvec / r
    b = -(isotopes.MU0 / (4.0 * math.pi)) * gammas[0] * gammas[1] \
        * isotopes.HBAR / (2.0 * math.pi * r ** 3)
    return b * (3.0 * np.outer(n, n) - np.eye(3))


def detect_bonds(atoms: list[Spin], threshold: float = DEFAULT_BOND_THRESHOLD
                 ) -> list[tuple[int, int]]:
    """Undirected bonds between located non-electron spins within threshold."""
    if threshold <= 0.0:
        raise ValueError("bond threshold must be > 0")
    located = [s for s in atoms if not s.is_electron and s.coordinates is not None]
    bonds = []
    for i, a in enumerate(located):
        for b in located[i + 1:]:
            if np.linalg.norm(a.coordinates - b.coordinates) <= threshold:
                bonds.append((a.id, b.id))
    return bonds


@dataclass(frozen=True)
class Ellipsoid:
    """Principal-axis ellipsoid of one interaction tensor.

    Semi-axes are scale * |eigenvalue|; eigen_signs flag positive (True)
    versus negative (False) eigenvalues for axis coloring; an all-zero
    tensor is marked degenerate and rendered as a point.
    """

    interaction_id: int
    center: np.ndarray
    semi_axes: np.ndarray
    orientation: Quaternion
    eigen_signs: tuple[bool, bool, bool]
    color_role: str
    degenerate: bool = False

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(3).copy()
        s = np.asarray(self.semi_axes, dtype=float).reshape(3).copy()
        c.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "semi_axes", s)


@dataclass(frozen=True)
class LineGlyph:
    interaction_id: int
    spin_1: int
    spin_2: int
    magnitude: float


@dataclass(frozen=True)
class CoilGlyph:
    interaction_id: int
    spin_1: int
    spin_2: int
    magnitude: float


@dataclass(frozen=True)
class SceneAtom:
    id: int
    element: str
    isotope: str
    coordinates: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coordinates, dtype=float).reshape(3).copy()
        c.flags.writeable = False
        object.__setattr__(self, "coordinates", c)


@dataclass(frozen=True)
class ElectronGlyph:
    id: int
    position: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.position, dtype=float).reshape(3).copy()
        p.flags.writeable = False
        object.__setattr__(self, "position", p)


@dataclass(frozen=True)
class SceneDocument:
    mode: str
    atoms: tuple[SceneAtom, ...]
    bonds: tuple[tuple[int, int], ...]
    ellipsoids: tuple[Ellipsoid, ...]
    lines: tuple[LineGlyph, ...]
    coils: tuple[CoilGlyph, ...]
    electrons: tuple[ElectronGlyph, ...]
    scale_factors: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_SCALES))


def make_ellipsoid(term: InteractionTerm, center, scale: float = 1.0) -> Ellipsoid:
    """Ellipsoid glyph of a term: a unit sphere scaled by the eigenvalue
    moduli, rotated into the principal axis frame, translated to center."""
    m = promote_amplitude(term)
    es = eigens_from_matrix((m + m.T) / 2.0, "ascending")
    semi = scale * np.abs(es.eigenvalues)
    degenerate = bool(np.max(semi) == 0.0)
    orientation = from_dcm(es.rotation, "quaternion")
    signs = tuple(bool(v >= 0.0) for v in es.eigenvalues)
    role = ELLIPSOID_ROLE.get(term.kind, "shielding")
    return Ellipsoid(interaction_id=term.id, center=np.asarray(center, dtype=float),
                     semi_axes=semi, orientation=orientation, eigen_signs=signs,
                     color_role=role, degenerate=degenerate)


def electron_layout(sys: SpinSystem) -> dict[int, np.ndarray]:
    """Synthetic strip positions for electrons, below the molecular box."""
    electrons = [s for s in sys.spins if s.is_electron]
    if not electrons:
        return {}
    coords = np.array([s.coordinates for s in sys.spins
                       if not s.is_electron and s.coordinates is not None])
    if coords.size:
        lo, hi = coords.min(axis=0), coords.max(axis=0)
        height = float(hi[1] - lo[1]) or 1.0
        y = float(lo[1]) - 1.5 * height
        xs = (np.linspace(lo[0], hi[0], len(electrons)) if len(electrons) > 1
              else np.array([(lo[0] + hi[0]) / 2.0]))
        z = float((lo[2] + hi[2]) / 2.0)
    else:
        y, z = -1.5, 0.0
        xs = np.arange(len(electrons), dtype=float)
    return {s.id: np.array([float(x), y, z]) for s, x in zip(electrons, xs)}


def build_scene(sys: SpinSystem, mode: str = "nmr",
                scales: dict[str, float] | None = None,
                bond_threshold: float = DEFAULT_BOND_THRESHOLD,
                display_threshold: float = 0.0) -> SceneDocument:
    """Assemble the render-ready scene for one view mode.

    The NMR and EPR glyph sets are disjoint and together cover every
    visualizable term exactly once; dipolar couplings are represented by
    the particle positions themselves and spinrotation terms have no
    glyph.  ``display_threshold`` suppresses line glyphs below a magnitude
    (it does not touch the document).
    """
    if mode not in ("nmr", "epr"):
        raise ValueError(f"unknown scene mode {mode!r}")
    scale_factors = dict(DEFAULT_SCALES)
    if scales:
        scale_factors.update(scales)
    atoms = tuple(SceneAtom(id=s.id, element=s.element, isotope=s.isotope,
                            coordinates=s.coordinates)
                  for s in sys.spins
                  if not s.is_electron and s.coordinates is not None)
    bonds = tuple(detect_bonds(list(sys.spins), bond_threshold))
    e_pos = electron_layout(sys)
    electrons = tuple(ElectronGlyph(id=sid, position=pos)
                      for sid, pos in e_pos.items())

    wanted = NMR_KINDS if mode == "nmr" else EPR_KINDS
    located = {s.id: s.coordinates for s in sys.spins if s.coordinates is not None}
    ellipsoids: list[Ellipsoid] = []
    lines: list[LineGlyph] = []
    coils: list[CoilGlyph] = []
    for term in sys.interactions:
        if term.kind not in wanted:
            continue
        if term.kind is InteractionKind.JCOUPLING:
            if term.spin_1 in located and term.spin_2 in located:
                mag = frobenius_norm(promote_amplitude(term))
                if mag >= display_threshold:
                    lines.append(LineGlyph(interaction_id=term.id, spin_1=term.spin_1,
                                           spin_2=term.spin_2, magnitude=mag))
            continue
        if term.kind is InteractionKind.EXCHANGE:
            if term.spin_1 in e_pos and term.spin_2 in e_pos:
                mag = frobenius_norm(promote_amplitude(term))
                coils.append(CoilGlyph(interaction_id=term.id, spin_1=term.spin_1,
                                       spin_2=term.spin_2, magnitude=mag))
            continue
        # ellipsoid glyphs: pick the anchor position per kind
        if term.kind is InteractionKind.HFC:
            center = located.get(term.spin_2)
        elif term.kind in (InteractionKind.GTENSOR, InteractionKind.ZFS):
            center = e_pos.get(term.spin_1)
        else:
            center = located.get(term.spin_1)
        if center is None:
            continue
        role = ELLIPSOID_ROLE[term.kind]
        ellipsoids.append(make_ellipsoid(term, center, scale_factors.get(role, 1.0)))
    return SceneDocument(mode=mode, atoms=atoms, bonds=bonds,
                         ellipsoids=tuple(ellipsoids), lines=tuple(lines),
                         coils=tuple(coils), electrons=electrons,
                         scale_factors=scale_factors)
