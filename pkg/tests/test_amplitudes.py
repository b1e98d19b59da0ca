import math

import numpy as np
import pytest

from spinxml.amplitudes import (
    DegenerateConventionError,
    InvalidComponentsError,
    axrh_from_eigens,
    bundle_from_eigens,
    bundle_from_matrix,
    eigens_from_axrh,
    eigens_from_haeberlen,
    eigens_from_matrix,
    eigens_from_spanskew,
    frobenius_norm,
    haeberlen_from_eigens,
    matrix_from_spherical,
    recompute_views,
    spanskew_from_eigens,
    spherical_from_matrix,
)
from spinxml.rotations import EulerAngles, to_dcm, wigner_d2

from conftest import random_rotation_matrices


def rz(deg):
    a = math.radians(deg)
    return np.array([[math.cos(a), -math.sin(a), 0.0],
                     [math.sin(a), math.cos(a), 0.0],
                     [0.0, 0.0, 1.0]])


class TestEigensFromMatrix:
    def test_diagonal_ascending(self):
        es = eigens_from_matrix(np.diag([20.2, 21.8, 22.2]), "ascending")
        assert np.allclose(es.eigenvalues, [20.2, 21.8, 22.2], atol=0)
        assert np.allclose(es.rotation, np.eye(3), atol=0)

    def test_identity_tie_break(self):
        es = eigens_from_matrix(np.eye(3))
        assert np.allclose(es.eigenvalues, [1.0, 1.0, 1.0], atol=0)
        assert np.allclose(es.rotation, np.eye(3), atol=0)

    def test_construct_then_decompose(self):
        r = rz(30.0)
        m = r @ np.diag([1.0, 2.0, 3.0]) @ r.T
        es = eigens_from_matrix(m, "ascending")
        assert np.allclose(es.eigenvalues, [1.0, 2.0, 3.0], atol=1e-12)
        assert np.max(np.abs(es.reconstruct() - m)) < 1e-12
        # same rotation up to per-axis sign flips
        signs = es.rotation.T @ r
        assert np.allclose(np.abs(signs), np.eye(3), atol=1e-9)

    def test_rotation_always_proper(self):
        for m in random_rotation_matrices(20, seed=21):
            t = m @ np.diag([3.0, -1.0, 0.5]) @ m.T
            for ordering in ("haeberlen", "ascending", "descending"):
                es = eigens_from_matrix(t, ordering)
                assert np.linalg.det(es.rotation) == pytest.approx(1.0, abs=1e-9)
                assert np.max(np.abs(es.reconstruct() - t)) < 1e-9

    def test_antisymmetric_part_warns(self):
        m = np.eye(3)
        m[0, 1] = 0.5
        with pytest.warns(UserWarning):
            eigens_from_matrix(m)

    def test_haeberlen_ordering(self):
        es = eigens_from_matrix(np.diag([20.2, 21.8, 22.2]), "haeberlen")
        # assignment by deviation from iso 21.4: zz=20.2, xx=22.2, yy=21.8
        assert np.allclose(es.eigenvalues, [22.2, 21.8, 20.2], atol=0)


class TestHaeberlen:
    def test_formaldehyde_proton_values(self):
        h = haeberlen_from_eigens([20.2, 21.8, 22.2])
        assert h.iso == pytest.approx(21.4, abs=1e-12)
        assert h.aniso == pytest.approx(-1.8, abs=1e-12)
        assert h.asym == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_isotropic_degenerate(self):
        with pytest.raises(DegenerateConventionError):
            haeberlen_from_eigens([5.0, 5.0, 5.0])

    def test_axial(self):
        h = haeberlen_from_eigens([-1.0, -1.0, 2.0])
        assert h.iso == pytest.approx(0.0, abs=0)
        assert h.aniso == pytest.approx(3.0, abs=1e-12)
        assert h.asym == pytest.approx(0.0, abs=1e-12)

    def test_inverse_example(self):
        evals = eigens_from_haeberlen(21.4, -1.8, 1.0 / 3.0)
        assert np.allclose(sorted(evals), [20.2, 21.8, 22.2], atol=1e-12)

    def test_inverse_axial(self):
        evals = eigens_from_haeberlen(0.0, 3.0, 0.0)
        assert np.allclose(sorted(evals), [-1.0, -1.0, 2.0], atol=1e-12)

    def test_asym_domain(self):
        with pytest.raises(ValueError):
            eigens_from_haeberlen(0.0, 1.0, 1.5)

    def test_round_trip_random(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            evals = rng.normal(scale=10.0, size=3)
            try:
                h = haeberlen_from_eigens(evals)
            except DegenerateConventionError:
                continue
            back = eigens_from_haeberlen(*h)
            assert np.allclose(np.sort(back), np.sort(evals), rtol=1e-12, atol=1e-12)


class TestAxRh:
    def test_traceless_axial(self):
        v = axrh_from_eigens([-1.0, -1.0, 2.0])
        assert v.iso == pytest.approx(0.0, abs=0)
        assert v.ax == pytest.approx(3.0, abs=1e-12)
        assert v.rh == pytest.approx(0.0, abs=1e-12)

    def test_formaldehyde_proton(self):
        v = axrh_from_eigens([22.2, 21.8, 20.2])
        assert v.iso == pytest.approx(21.4, abs=1e-12)
        assert v.ax == pytest.approx(-1.8, abs=1e-12)
        assert v.rh == pytest.approx(0.2, abs=1e-12)

    def test_degenerate_is_fine(self):
        v = axrh_from_eigens([5.0, 5.0, 5.0])
        assert (v.ax, v.rh) == (0.0, 0.0)

    def test_round_trip_random(self):
        rng = np.random.default_rng(23)
        for _ in range(1000):
            evals = rng.normal(scale=4.0, size=3)
            v = axrh_from_eigens(evals)
            back = eigens_from_axrh(*v)
            assert np.allclose(np.sort(back), np.sort(evals), rtol=1e-12, atol=1e-12)


class TestSpanSkew:
    def test_figure_values_invert(self):
        # forward-map oracle on the published carbon values
        evals = eigens_from_spanskew(-25.31, 214.70, 0.135, "shielding")
        assert np.allclose(evals, [-127.82925, -34.9715, 86.87075], atol=1e-10)
        ss = spanskew_from_eigens(evals, "shielding")
        assert ss.iso == pytest.approx(-25.31, rel=1e-12)
        assert ss.span == pytest.approx(214.70, rel=1e-12)
        assert ss.skew == pytest.approx(0.135, rel=1e-12)

    def test_isotropic_degenerate(self):
        with pytest.raises(DegenerateConventionError):
            spanskew_from_eigens([5.0, 5.0, 5.0])

    def test_inverse_rejects_negative_span(self):
        with pytest.raises(ValueError):
            eigens_from_spanskew(0.0, -1.0, 0.0)

    def test_skew_bounds_property(self):
        rng = np.random.default_rng(29)
        for _ in range(500):
            evals = rng.normal(scale=10.0, size=3)
            try:
                ss = spanskew_from_eigens(evals)
            except DegenerateConventionError:
                continue
            assert -1.0 <= ss.skew <= 1.0
            assert ss.span >= 0.0

    def test_ordering_invariance(self):
        evals = np.array([3.0, -1.0, 7.5])
        base = spanskew_from_eigens(evals)
        for perm in ((0, 2, 1), (1, 0, 2), (2, 1, 0), (1, 2, 0), (2, 0, 1)):
            assert spanskew_from_eigens(evals[list(perm)]) == base

    def test_shift_flips_skew_sign(self):
        evals = [3.0, -1.0, 7.5]
        assert spanskew_from_eigens(evals, "shift").skew == \
            pytest.approx(-spanskew_from_eigens(evals, "shielding").skew, rel=1e-12)

    def test_shift_inverse_ordering(self):
        evals = eigens_from_spanskew(10.0, 6.0, 0.5, "shift")
        assert evals[0] >= evals[1] >= evals[2]
        ss = spanskew_from_eigens(evals, "shift")
        assert ss.skew == pytest.approx(0.5, rel=1e-12)

    def test_round_trip_random(self):
        rng = np.random.default_rng(31)
        for kind in ("shielding", "shift"):
            for _ in range(500):
                evals = rng.normal(scale=10.0, size=3)
                try:
                    ss = spanskew_from_eigens(evals, kind)
                except DegenerateConventionError:
                    continue
                back = eigens_from_spanskew(*ss, kind)
                assert np.allclose(np.sort(back), np.sort(evals),
                                   rtol=1e-12, atol=1e-12)


class TestFrobenius:
    def test_identity(self):
        assert frobenius_norm(np.eye(3)) == pytest.approx(math.sqrt(3.0), abs=0)

    def test_promoted_scalar_coupling(self):
        assert frobenius_norm(np.eye(3) * 29.13) == \
            pytest.approx(29.13 * math.sqrt(3.0), rel=1e-12)
        assert frobenius_norm(np.eye(3) * 29.13) == pytest.approx(50.454, abs=1e-3)

    def test_zero(self):
        assert frobenius_norm(np.zeros((3, 3))) == 0.0


class TestSpherical:
    def test_identity_only_rank0(self):
        s = spherical_from_matrix(np.eye(3))
        assert s.rank0 == pytest.approx(math.sqrt(3.0))
        assert np.max(np.abs(s.rank1)) == 0.0
        assert np.max(np.abs(s.rank2)) == 0.0

    def test_pure_antisymmetric_only_rank1(self):
        m = np.zeros((3, 3))
        m[0, 1], m[1, 0] = 1.0, -1.0
        s = spherical_from_matrix(m)
        assert s.rank0 == 0.0
        assert np.max(np.abs(s.rank2)) == 0.0
        assert np.max(np.abs(s.rank1)) > 0.0

    def test_round_trip_random(self):
        rng = np.random.default_rng(37)
        for _ in range(500):
            m = rng.normal(size=(3, 3))
            back = matrix_from_spherical(spherical_from_matrix(m))
            assert np.max(np.abs(back - m)) < 1e-12

    def test_norm_preservation(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            m = rng.normal(size=(3, 3))
            s = spherical_from_matrix(m)
            total = abs(s.rank0) ** 2 + np.sum(np.abs(s.rank1) ** 2) \
                + np.sum(np.abs(s.rank2) ** 2)
            assert total == pytest.approx(frobenius_norm(m) ** 2, rel=1e-12)

    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(43)
        m = rng.normal(size=(3, 3))
        s = spherical_from_matrix(m)
        for l_arr, l in ((s.rank1, 1), (s.rank2, 2)):
            for m_idx in range(-l, l + 1):
                left = l_arr[l - m_idx]
                right = (-1) ** m_idx * np.conj(l_arr[l + m_idx])
                assert left == pytest.approx(right, abs=1e-12)

    def test_invalid_components_rejected(self):
        s = spherical_from_matrix(np.diag([1.0, 2.0, 3.0]))
        bad = type(s)(rank0=s.rank0, rank1=s.rank1,
                      rank2=s.rank2 + np.array([0, 0, 1e-3j, 0, 0]))
        with pytest.raises(InvalidComponentsError):
            matrix_from_spherical(bad)

    def test_rank2_wigner_equivariance(self):
        rng = np.random.default_rng(47)
        rots = random_rotation_matrices(100, seed=47)
        for r in rots:
            m = rng.normal(size=(3, 3))
            left = spherical_from_matrix(r @ m @ r.T).rank2
            right = wigner_d2(r) @ spherical_from_matrix(m).rank2
            assert np.max(np.abs(left - right)) < 1e-9


class TestRecomputeViews:
    def test_edit_eigenvalues_identity_orientation(self):
        b = bundle_from_eigens([1.0, 1.0, 1.0], np.eye(3))
        b2 = recompute_views(b, "eigenvalues", [4.0, 5.0, 6.0])
        assert np.allclose(b2.matrix, np.diag([4.0, 5.0, 6.0]), atol=0)

    def test_edit_euler_matches_promoted_matrix(self):
        b = bundle_from_eigens([20.2, 21.8, 22.2], np.eye(3))
        b2 = recompute_views(b, "euler", (230.4, 0.0, 0.0))
        r = to_dcm(EulerAngles(230.4, 0, 0))
        expected = r @ np.diag([20.2, 21.8, 22.2]) @ r.T
        assert np.max(np.abs(b2.matrix - expected)) < 1e-12

    def test_edit_preserves_other_side(self):
        b = bundle_from_eigens([1.0, 2.0, 3.0], EulerAngles(10, 20, 30))
        b_ev = recompute_views(b, "eigenvalues", [9.0, 8.0, 7.0])
        assert np.max(np.abs(b_ev.dcm - b.dcm)) == 0.0
        b_rot = recompute_views(b, "euler", (40.0, 50.0, 60.0))
        assert np.allclose(b_rot.eigenvalues, b.eigenvalues, atol=0)

    def test_edit_and_revert(self):
        b = bundle_from_eigens([1.0, 2.0, 3.0], EulerAngles(10, 20, 30))
        cases = [
            ("eigenvalues", [5.0, 6.0, 7.0], list(b.eigenvalues)),
            ("euler", (80.0, 40.0, 10.0),
             (b.euler.alpha, b.euler.beta, b.euler.gamma)),
            ("angle_axis_angle", 45.0, b.angle_axis.angle),
            ("matrix", np.diag([9.0, 9.0, 1.0]), b.matrix.copy()),
            ("spherical", spherical_from_matrix(np.diag([1.0, 4.0, 9.0])),
             b.spherical),
        ]
        for field, new_value, old_value in cases:
            edited = recompute_views(b, field, new_value)
            back = recompute_views(edited, field, old_value)
            assert np.max(np.abs(back.matrix - b.matrix)) < 1e-9, field

    def test_readonly_fields_rejected(self):
        b = bundle_from_matrix(np.diag([1.0, 2.0, 3.0]))
        for field in ("quaternion", "dcm", "wigner", "haeberlen", "eigenvectors"):
            with pytest.raises(ValueError):
                recompute_views(b, field, None)

    def test_degenerate_views_are_none_not_errors(self):
        b = bundle_from_matrix(np.eye(3) * 7.0)
        assert b.haeberlen is None
        assert b.spanskew is None
        assert b.axrh.ax == 0.0

    def test_bundle_views_agree(self):
        rng = np.random.default_rng(53)
        for _ in range(50):
            m = rng.normal(size=(3, 3))
            b = bundle_from_matrix(m)
            sym = (m + m.T) / 2.0
            recon = b.dcm @ np.diag(b.eigenvalues) @ b.dcm.T
            assert np.max(np.abs(recon - sym)) < 1e-9
            assert np.max(np.abs(matrix_from_spherical(b.spherical) - m)) < 1e-9
            assert np.max(np.abs(to_dcm(b.quaternion) - b.dcm)) < 1e-9
            assert np.max(np.abs(to_dcm(b.euler) - b.dcm)) < 1e-9
            assert np.max(np.abs(to_dcm(b.angle_axis) - b.dcm)) < 1e-9

    def test_antisymmetric_part_survives_eigen_edits(self):
        m = np.diag([1.0, 2.0, 3.0])
        m[0, 1], m[1, 0] = 0.4, -0.4
        b = bundle_from_matrix(m)
        b2 = recompute_views(b, "eigenvalues", [1.0, 2.0, 3.0])
        anti = (b2.matrix - b2.matrix.T) / 2.0
        assert anti[0, 1] == pytest.approx(0.4, abs=1e-12)
