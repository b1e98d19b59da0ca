import math

import numpy as np
import pytest

from spinxml.geometry import (
    build_scene,
    detect_bonds,
    dipolar_tensor,
    electron_layout,
    make_ellipsoid,
)
from spinxml.model import (
    InteractionKind,
    InteractionTerm,
    MatrixAmplitude,
    ScalarAmplitude,
    Spin,
    SpinSystem,
)
from spinxml.rotations import to_dcm, EulerAngles
from spinxml.spinxml_io import parse_spinxml

from conftest import FIXTURES


def _h(spin_id, coords):
    return Spin(id=spin_id, isotope="1H", coordinates=np.asarray(coords, float))


class TestDipolar:
    # Oracle evaluated from scratch: b = -(mu0/4pi) gamma^2 hbar / (2 pi r^3)
    # with CODATA 2018 constants typed in directly, two 1H at 2 Angstrom.
    B_ORACLE = -(1.0e-7) * (2.6752218744e8) ** 2 * 1.054571817e-34 \
        / (2.0 * math.pi * (2.0e-10) ** 3)

    def test_proton_pair_at_2A(self):
        d = dipolar_tensor(_h(1, [0, 0, 0]), _h(2, [0, 0, 2.0]))
        assert abs(self.B_ORACLE) == pytest.approx(15.0e3, rel=5e-3)
        assert d[2, 2] == pytest.approx(2.0 * self.B_ORACLE, rel=1e-9)
        assert d[0, 0] == pytest.approx(-self.B_ORACLE, rel=1e-9)
        assert d[1, 1] == pytest.approx(-self.B_ORACLE, rel=1e-9)

    def test_traceless_symmetric_axial(self):
        d = dipolar_tensor(_h(1, [0.3, -0.4, 0.1]), _h(2, [1.3, 0.9, -0.7]))
        assert abs(np.trace(d)) < 1e-10 * np.max(np.abs(d))
        assert np.max(np.abs(d - d.T)) == 0.0
        # axial: the two perpendicular eigenvalues (-b > 0) coincide
        evals = np.sort(np.linalg.eigvalsh(d))
        assert evals[1] == pytest.approx(evals[2], rel=1e-10)

    def test_unique_axis_parallel_to_bond(self):
        a, b = np.array([0.3, -0.4, 0.1]), np.array([1.3, 0.9, -0.7])
        d = dipolar_tensor(_h(1, a), _h(2, b))
        evals, evecs = np.linalg.eigh(d)
        unique = evecs[:, np.argmin(evals)]  # negative unique eigenvalue (b < 0)
        n = (b - a) / np.linalg.norm(b - a)
        assert abs(abs(np.dot(unique, n)) - 1.0) < 1e-10

    def test_inverse_cube_scaling(self):
        d1 = dipolar_tensor(_h(1, [0, 0, 0]), _h(2, [0, 0, 1.0]))
        d2 = dipolar_tensor(_h(1, [0, 0, 0]), _h(2, [0, 0, 2.0]))
        assert np.allclose(d1, 8.0 * d2, rtol=1e-12, atol=0)

    def test_coincident_coordinates(self):
        with pytest.raises(ValueError, match="coincident"):
            dipolar_tensor(_h(1, [1, 1, 1]), _h(2, [1, 1, 1]))

    def test_nonmagnetic_isotope(self):
        o16 = Spin(id=2, isotope="16O", coordinates=np.array([0.0, 0.0, 2.0]))
        with pytest.raises(ValueError, match="not magnetic"):
            dipolar_tensor(_h(1, [0, 0, 0]), o16)

    def test_missing_coordinates(self):
        with pytest.raises(ValueError, match="coordinates"):
            dipolar_tensor(_h(1, [0, 0, 0]), Spin(id=2, isotope="1H"))


class TestBonds:
    @pytest.fixture
    def formaldehyde(self, formaldehyde_xml):
        return parse_spinxml(formaldehyde_xml).system

    def test_distances_against_hand_arithmetic(self, formaldehyde):
        spins = {s.id: s for s in formaldehyde.spins}
        ch = np.linalg.norm(spins[1].coordinates - spins[3].coordinates)
        co = np.linalg.norm(spins[3].coordinates - spins[4].coordinates)
        hh = np.linalg.norm(spins[1].coordinates - spins[2].coordinates)
        assert ch == pytest.approx(math.sqrt(0.937 ** 2 + 0.526 ** 2), abs=1e-12)
        assert ch == pytest.approx(1.0746, abs=1e-4)
        assert co == pytest.approx(1.199, abs=1e-12)
        assert hh == pytest.approx(1.874, abs=1e-12)

    def test_threshold_1_3(self, formaldehyde):
        # plain distance rule: C-H (1.0746) and C-O (1.199) bond, H-H (1.874)
        # does not; with these coordinates H-O (1.1536) also falls under 1.3
        bonds = detect_bonds(list(formaldehyde.spins), 1.3)
        assert (1, 3) in bonds and (2, 3) in bonds and (3, 4) in bonds
        assert (1, 2) not in bonds
        assert sorted(bonds) == [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]

    def test_tiny_threshold(self, formaldehyde):
        assert detect_bonds(list(formaldehyde.spins), 0.1) == []

    def test_huge_threshold_complete_graph(self, formaldehyde):
        assert len(detect_bonds(list(formaldehyde.spins), 10.0)) == 6

    def test_nonpositive_threshold(self, formaldehyde):
        with pytest.raises(ValueError):
            detect_bonds(list(formaldehyde.spins), 0.0)


class TestEllipsoid:
    def _term(self, matrix, kind=InteractionKind.SHIELDING):
        return InteractionTerm(id=1, kind=kind, spin_1=1,
                               amplitude=MatrixAmplitude(np.asarray(matrix, float)))

    def test_isotropic_sphere(self):
        e = make_ellipsoid(self._term(np.eye(3) * -4.0), [0, 0, 0], scale=0.5)
        assert np.allclose(e.semi_axes, [2.0, 2.0, 2.0], atol=0)
        assert e.eigen_signs == (False, False, False)
        assert not e.degenerate

    def test_sign_flags(self):
        e = make_ellipsoid(self._term(np.diag([1.0, 1.0, -2.0])), [0, 0, 0])
        assert sorted(zip(e.semi_axes, e.eigen_signs)) == \
            [(1.0, True), (1.0, True), (2.0, False)]

    def test_zero_tensor_degenerate(self):
        e = make_ellipsoid(self._term(np.zeros((3, 3))), [1, 2, 3])
        assert e.degenerate
        assert np.allclose(e.center, [1, 2, 3], atol=0)

    def test_orientation_follows_constructing_rotation(self):
        r = to_dcm(EulerAngles(40.0, 25.0, 0.0))
        m = r @ np.diag([1.0, 2.0, 3.0]) @ r.T
        e = make_ellipsoid(self._term(m), [0, 0, 0])
        # same rotation up to eigen-frame sign/permutation canonicalization
        q = to_dcm(e.orientation)
        agreement = np.abs(q.T @ r)
        assert np.allclose(agreement, np.eye(3), atol=1e-9)

    def test_color_roles(self):
        assert make_ellipsoid(self._term(np.eye(3)), [0, 0, 0]).color_role == "shielding"
        t = self._term(np.eye(3), InteractionKind.QUADRUPOLAR)
        assert make_ellipsoid(t, [0, 0, 0]).color_role == "quadrupolar"


class TestScene:
    @pytest.fixture
    def formaldehyde(self, formaldehyde_xml):
        return parse_spinxml(formaldehyde_xml).system

    @pytest.fixture
    def mixed(self):
        return parse_spinxml((FIXTURES / "all_variants.xml").read_bytes()).system

    def test_formaldehyde_nmr(self, formaldehyde):
        scene = build_scene(formaldehyde, "nmr", bond_threshold=1.3)
        assert len(scene.atoms) == 4
        # the distance rule also links both H to O at this threshold
        assert len(scene.bonds) == 5
        assert len(scene.ellipsoids) == 3
        assert len(scene.lines) == 3
        assert scene.electrons == ()
        assert scene.coils == ()

    def test_formaldehyde_epr_empty(self, formaldehyde):
        scene = build_scene(formaldehyde, "epr")
        assert scene.ellipsoids == () and scene.lines == () and scene.coils == ()

    def test_partition_disjoint_and_covering(self, mixed):
        nmr = build_scene(mixed, "nmr")
        epr = build_scene(mixed, "epr")

        def glyph_ids(scene):
            return {e.interaction_id for e in scene.ellipsoids} \
                | {g.interaction_id for g in scene.lines} \
                | {g.interaction_id for g in scene.coils}

        nmr_ids, epr_ids = glyph_ids(nmr), glyph_ids(epr)
        assert nmr_ids.isdisjoint(epr_ids)
        visualizable = {t.id for t in mixed.interactions
                        if t.kind not in (InteractionKind.DIPOLAR,
                                          InteractionKind.SPINROTATION)}
        assert nmr_ids | epr_ids == visualizable

    def test_line_magnitude_is_frobenius(self, formaldehyde):
        scene = build_scene(formaldehyde, "nmr")
        small = [g for g in scene.lines if g.spin_2 == 2][0]
        assert small.magnitude == pytest.approx(29.13 * math.sqrt(3), rel=1e-12)

    def test_display_threshold_suppresses_lines(self, formaldehyde):
        scene = build_scene(formaldehyde, "nmr", display_threshold=60.0)
        assert len(scene.lines) == 2

    def test_electron_strip_below_molecule(self, mixed):
        layout = electron_layout(mixed)
        assert set(layout) == {10, 11}
        nuclei_y = [s.coordinates[1] for s in mixed.spins
                    if not s.is_electron and s.coordinates is not None]
        lo, hi = min(nuclei_y), max(nuclei_y)
        for pos in layout.values():
            assert pos[1] == pytest.approx(lo - 1.5 * (hi - lo), abs=1e-12)

    def test_hfc_sits_on_nucleus(self, mixed):
        epr = build_scene(mixed, "epr")
        hfc_term = next(t for t in mixed.interactions
                        if t.kind is InteractionKind.HFC)
        glyph = next(e for e in epr.ellipsoids
                     if e.interaction_id == hfc_term.id)
        nucleus = mixed.spin_by_id(hfc_term.spin_2)
        assert np.allclose(glyph.center, nucleus.coordinates, atol=0)

    def test_gtensor_sits_on_electron_strip(self, mixed):
        epr = build_scene(mixed, "epr")
        g_term = next(t for t in mixed.interactions
                      if t.kind is InteractionKind.GTENSOR)
        glyph = next(e for e in epr.ellipsoids if e.interaction_id == g_term.id)
        assert np.allclose(glyph.center, electron_layout(mixed)[g_term.spin_1], atol=0)

    def test_deterministic(self, mixed):
        from spinxml.serialize import scene_to_dict
        assert scene_to_dict(build_scene(mixed, "nmr")) == \
            scene_to_dict(build_scene(mixed, "nmr"))

    def test_scales_apply(self, formaldehyde):
        base = build_scene(formaldehyde, "nmr")
        doubled = build_scene(formaldehyde, "nmr", scales={"shielding": 2.0})
        assert np.allclose(doubled.ellipsoids[0].semi_axes,
                           2.0 * base.ellipsoids[0].semi_axes, rtol=1e-12)

    def test_unknown_mode(self, formaldehyde):
        with pytest.raises(ValueError):
            build_scene(formaldehyde, "xray")
