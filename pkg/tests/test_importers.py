import math

import numpy as np
import pytest

from spinxml.amplitudes import frobenius_norm
from spinxml.importers import (
    ImportFileError,
    ImportOptions,
    filter_by_norm,
    import_gaussian_log,
    import_magres,
    import_xyz,
)
from spinxml.model import InteractionKind, promote_amplitude, validate_system
from spinxml.spinxml_io import parse_spinxml

from conftest import FIXTURES


class TestXyz:
    def test_formaldehyde(self):
        report = import_xyz((FIXTURES / "formaldehyde.xyz").read_text())
        s = report.system
        assert [sp.isotope for sp in s.spins] == ["1H", "1H", "12C", "16O"]
        assert np.allclose(s.spins[3].coordinates, [0.0, 0.673, 0.0], atol=0)
        assert s.interactions == ()
        # carbon and oxygen guesses are non-magnetic and must be flagged
        flagged = [w for w in report.warnings if "non-magnetic" in w.message]
        assert len(flagged) == 2
        assert validate_system(s).ok

    def test_empty_file(self):
        with pytest.raises(ImportFileError):
            import_xyz("")

    def test_count_mismatch(self):
        with pytest.raises(ImportFileError, match="mismatch"):
            import_xyz("2\ncomment\nH 0 0 0\nH 1 0 0\nH 2 0 0\n")

    def test_unknown_element(self):
        with pytest.raises(ImportFileError, match="Xq"):
            import_xyz("1\ncomment\nXq 0 0 0\n")


class TestGaussian:
    @pytest.fixture
    def log_text(self):
        return (FIXTURES / "formaldehyde_giao.log").read_text()

    def test_last_coordinate_table_wins(self, log_text):
        s = import_gaussian_log(log_text).system
        assert len(s.spins) == 4
        assert np.allclose(s.spins[0].coordinates, [0.937, 0.0, 0.0], atol=0)
        assert np.allclose(s.spins[3].coordinates, [0.0, 0.673, 0.0], atol=0)
        # the first (input orientation) table holds 9.999 sentinels
        assert not any(np.any(np.abs(sp.coordinates) > 9.0) for sp in s.spins)

    def test_shielding_tensors(self, log_text):
        s = import_gaussian_log(log_text).system
        shieldings = [t for t in s.interactions
                      if t.kind is InteractionKind.SHIELDING]
        assert len(shieldings) == 4
        assert all(t.units == "ppm" and t.reference == "absolute"
                   for t in shieldings)
        m1 = shieldings[0].amplitude.matrix
        assert np.allclose(m1, [[21.1499, -0.7858, 0.0],
                                [-0.7858, 20.8501, 0.0],
                                [0.0, 0.0, 22.2]], atol=0)
        # component labels map as row/column: YX= fills row y, column x
        m4 = shieldings[3].amplitude.matrix
        assert m4[1, 0] == 12.5    # YX=
        assert m4[0, 1] == -8.25   # XY=
        assert "atom 1" in shieldings[0].label

    def test_jcouplings(self, log_text):
        s = import_gaussian_log(log_text).system
        js = [t for t in s.interactions if t.kind is InteractionKind.JCOUPLING]
        assert [(t.spin_1, t.spin_2, t.amplitude.value) for t in js] == [
            (1, 2, 29.13), (1, 3, 256.9), (2, 3, 256.9)]
        assert all(t.units == "Hz" for t in js)

    def test_threshold_drops_small_j(self, log_text):
        s = import_gaussian_log(log_text,
                                ImportOptions(norm_threshold=60.0)).system
        js = [t for t in s.interactions if t.kind is InteractionKind.JCOUPLING]
        # 29.13 * sqrt(3) = 50.45 < 60; 256.9 * sqrt(3) = 444.96 >= 60
        assert [(t.spin_1, t.spin_2) for t in js] == [(1, 3), (2, 3)]
        shieldings = [t for t in s.interactions
                      if t.kind is InteractionKind.SHIELDING]
        assert all(frobenius_norm(promote_amplitude(t)) >= 60.0 for t in shieldings)

    def test_threshold_zero_keeps_all(self, log_text):
        full = import_gaussian_log(log_text).system
        filtered = import_gaussian_log(log_text, ImportOptions(0.0)).system
        assert len(full.interactions) == len(filtered.interactions)

    def test_no_coordinates_is_error(self):
        with pytest.raises(ImportFileError, match="coordinate"):
            import_gaussian_log("nothing useful here\n")

    def test_missing_blocks_warn(self):
        text = "\n".join([
            "                         Standard orientation:",
            " ---------------------------------------------------------------------",
            "      1          1           0        0.000000    0.000000    0.000000",
            " ---------------------------------------------------------------------",
        ])
        report = import_gaussian_log(text)
        messages = [w.message for w in report.warnings]
        assert any("shielding" in m for m in messages)
        assert any("J coupling" in m for m in messages)

    def test_include_filter(self, log_text):
        opts = ImportOptions(include=frozenset({InteractionKind.JCOUPLING}))
        s = import_gaussian_log(log_text, opts).system
        assert {t.kind for t in s.interactions} == {InteractionKind.JCOUPLING}

    def test_import_writes_valid_spinxml(self, log_text):
        from spinxml.spinxml_io import write_spinxml
        system = import_gaussian_log(log_text).system
        reparsed = parse_spinxml(write_spinxml(system)).system
        assert len(reparsed.spins) == len(system.spins)
        assert len(reparsed.interactions) == len(system.interactions)


class TestMagres:
    def test_new_format(self):
        report = import_magres((FIXTURES / "formaldehyde_new.magres").read_text())
        s = report.system
        assert [sp.isotope for sp in s.spins] == ["1H", "1H", "12C"]
        assert np.allclose(s.spins[1].coordinates, [-0.937, 0.0, 0.0], atol=0)
        shieldings = [t for t in s.interactions
                      if t.kind is InteractionKind.SHIELDING]
        assert len(shieldings) == 3
        # duplicate ms line for H 1: the last occurrence wins
        assert shieldings[0].amplitude.matrix[0, 0] == 21.1499
        js = [t for t in s.interactions if t.kind is InteractionKind.JCOUPLING]
        assert len(js) == 1
        assert js[0].amplitude.value == pytest.approx((2.0 + 2.2 + 2.4) / 3.0)
        assert js[0].units == "10^19.T^2.J^-1"

    def test_old_format_matches_new(self):
        new = import_magres((FIXTURES / "formaldehyde_new.magres").read_text()).system
        old = import_magres((FIXTURES / "formaldehyde_old.magres").read_text()).system
        assert [s.isotope for s in old.spins] == [s.isotope for s in new.spins]
        for a, b in zip(old.spins, new.spins):
            assert np.allclose(a.coordinates, b.coordinates, atol=0)
        old_ms = [t for t in old.interactions if t.kind is InteractionKind.SHIELDING]
        new_ms = [t for t in new.interactions if t.kind is InteractionKind.SHIELDING]
        assert len(old_ms) == len(new_ms) == 3
        for a, b in zip(old_ms, new_ms):
            assert (a.spin_1, a.units) == (b.spin_1, b.units)
            assert np.allclose(a.amplitude.matrix, b.amplitude.matrix, atol=0)

    def test_garbage_is_dialect_error(self):
        with pytest.raises(ImportFileError, match="dialect"):
            import_magres("just some text\nwith lines\n")


class TestFilterByNorm:
    def test_zero_threshold_identity(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        assert filter_by_norm(system, 0.0) == system

    def test_formaldehyde_60hz(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        js_only = [t for t in system.interactions
                   if t.kind is InteractionKind.JCOUPLING]
        assert 29.13 * math.sqrt(3) < 60.0 < 256.9 * math.sqrt(3)
        filtered = filter_by_norm(system, 60.0)
        j_after = [t for t in filtered.interactions
                   if t.kind is InteractionKind.JCOUPLING]
        assert len(js_only) == 3 and len(j_after) == 2
        assert all(t.amplitude.value == 256.9 for t in j_after)
        assert len(filtered.spins) == len(system.spins)

    def test_negative_threshold(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        with pytest.raises(ValueError):
            filter_by_norm(system, -1.0)

    def test_composition_is_max(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        a, b = 55.0, 445.0
        twice = filter_by_norm(filter_by_norm(system, a), b)
        once = filter_by_norm(system, max(a, b))
        assert twice == once

    def test_monotone(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        kept = {t.id for t in filter_by_norm(system, 100.0).interactions}
        kept_higher = {t.id for t in filter_by_norm(system, 500.0).interactions}
        assert kept_higher <= kept
