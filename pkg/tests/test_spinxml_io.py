import numpy as np
import pytest

from spinxml.model import (
    EigenAmplitude,
    InteractionKind,
    InteractionTerm,
    IsoSpanSkew,
    MatrixAmplitude,
    ScalarAmplitude,
    SpinSystem,
    promote_amplitude,
)
from spinxml.rotations import AngleAxis, DCM, EulerAngles, Quaternion
from spinxml.spinxml_io import (
    SpinXMLParseError,
    convert_rotations,
    parse_spinxml,
    validate_against_schema,
    write_spinxml,
)

from conftest import FIXTURES


class TestParse:
    def test_formaldehyde_structure(self, formaldehyde_xml):
        report = parse_spinxml(formaldehyde_xml)
        s = report.system
        assert [spin.id for spin in s.spins] == [1, 2, 3, 4]
        assert [spin.isotope for spin in s.spins] == ["1H", "1H", "13C", "16O"]
        assert s.spins[0].label == "Proton A"
        assert np.allclose(s.spins[2].coordinates, [0.0, -0.526, 0.0], atol=0)
        assert len(s.interactions) == 6
        kinds = [t.kind for t in s.interactions]
        assert kinds.count(InteractionKind.SHIELDING) == 3
        assert kinds.count(InteractionKind.JCOUPLING) == 3
        # one eigenvalue+euler, one full tensor, one span_skew+euler
        first = s.interactions[0].amplitude
        assert isinstance(first, EigenAmplitude)
        assert first.rotation == EulerAngles(230.4, 0.0, 0.0)
        assert isinstance(s.interactions[1].amplitude, MatrixAmplitude)
        third = s.interactions[2].amplitude
        assert isinstance(third.eigenvalues, IsoSpanSkew)
        assert third.eigenvalues == IsoSpanSkew(iso=-25.31, span=214.70, skew=0.135)
        j_values = [t.amplitude.value for t in s.interactions[3:]]
        assert j_values == [29.13, 256.9, 256.9]
        assert all(t.units == "Hz" for t in s.interactions[3:])

    def test_unknown_kind_named_in_error(self):
        doc = b'<spin_system><spin number="1" isotope="1H"/>' \
              b'<interaction kind="banana" units="Hz" spin_1="1">' \
              b'<scalar>1</scalar></interaction></spin_system>'
        with pytest.raises(SpinXMLParseError, match="banana"):
            parse_spinxml(doc)

    def test_switch_violation(self):
        doc = b'<spin_system><interaction kind="shielding" units="ppm" spin_1="1">' \
              b'<scalar>1</scalar><tensor xx="1" xy="0" xz="0" yx="0" yy="1" ' \
              b'yz="0" zx="0" zy="0" zz="1"/></interaction></spin_system>'
        with pytest.raises(SpinXMLParseError, match="SWITCH"):
            parse_spinxml(doc)

    def test_missing_spin_1(self):
        doc = b'<spin_system><interaction kind="shielding" units="ppm">' \
              b'<scalar>1</scalar></interaction></spin_system>'
        with pytest.raises(SpinXMLParseError, match="spin_1"):
            parse_spinxml(doc)

    def test_unparseable_number_reports_line(self):
        doc = (b'<spin_system>\n<spin number="1" isotope="1H">\n'
               b'<coordinates x="0.0" y="oops" z="0.0" />\n</spin>\n</spin_system>')
        with pytest.raises(SpinXMLParseError, match=r"line 3"):
            parse_spinxml(doc)

    def test_missing_units_defaults_with_warning(self):
        doc = b'<spin_system><spin number="1" isotope="1H"/>' \
              b'<interaction kind="shielding" spin_1="1">' \
              b'<scalar>5</scalar></interaction></spin_system>'
        report = parse_spinxml(doc)
        assert report.system.interactions[0].units == "ppm"
        assert any("units" in w.message for w in report.warnings)

    def test_spin_id_alias_accepted(self):
        doc = b'<spin_system><spin id="7" isotope="1H"/></spin_system>'
        assert parse_spinxml(doc).system.spins[0].id == 7

    def test_duplicate_attribute_is_not_wellformed(self):
        # the published formaldehyde example carries a duplicated yz attribute;
        # a conforming XML parser must reject it
        doc = b'<spin_system><interaction kind="shielding" units="ppm" spin_1="1">' \
              b'<tensor xx="1" xy="0" xz="0" yy="-0.76" yz="20.87" yz="0.00" ' \
              b'zx="0" zy="0" zz="1"/></interaction></spin_system>'
        with pytest.raises(SpinXMLParseError, match="well-formed"):
            parse_spinxml(doc)

    def test_all_rotation_conventions_accepted(self):
        data = (FIXTURES / "all_variants.xml").read_bytes()
        system = parse_spinxml(data).system
        rots = [t.amplitude.rotation for t in system.interactions
                if isinstance(t.amplitude, EigenAmplitude)
                and t.amplitude.rotation is not None]
        assert {type(r) for r in rots} == {EulerAngles, AngleAxis, Quaternion, DCM}


class TestWrite:
    def test_empty_system(self):
        text = write_spinxml(SpinSystem()).decode()
        assert "<spin_system></spin_system>" in text

    def test_preserve_keeps_span_skew(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        text = write_spinxml(system, "preserve").decode()
        assert '<span_skew iso="-25.31" span="214.7" skew="0.135" />' in text

    def test_normalize_promotes_all_shieldings(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        text = write_spinxml(system, "normalize").decode()
        assert text.count("<tensor") == 3
        assert "span_skew" not in text
        assert "eigenvalues" not in text
        assert text.count("<scalar>") == 3

    def test_normalize_preserves_promoted_matrix(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        normalized = parse_spinxml(write_spinxml(system, "normalize")).system
        for before, after in zip(system.interactions, normalized.interactions):
            pb, pa = promote_amplitude(before), promote_amplitude(after)
            scale = max(1.0, np.max(np.abs(pb)))
            assert np.max(np.abs(pb - pa)) < 1e-9 * scale

    def test_write_parse_write_fixpoint(self):
        for name in ("formaldehyde.xml", "all_variants.xml"):
            data = (FIXTURES / name).read_bytes()
            once = write_spinxml(parse_spinxml(data).system)
            twice = write_spinxml(parse_spinxml(once).system)
            assert once == twice

    def test_numeric_fidelity_bit_exact(self):
        rng = np.random.default_rng(13)
        values = rng.normal(scale=1e3, size=20)
        system = SpinSystem(
            spins=tuple(),
            interactions=tuple(
                InteractionTerm(
                    id=i + 1, kind=InteractionKind.JCOUPLING, spin_1=1, spin_2=2,
                    units="Hz", amplitude=ScalarAmplitude(float(v)))
                for i, v in enumerate(values)))
        back = parse_spinxml(write_spinxml(system)).system
        for v, t in zip(values, back.interactions):
            assert t.amplitude.value == float(v)  # zero ULP drift

    def test_deterministic_output(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        assert write_spinxml(system) == write_spinxml(system)

    def test_convert_rotations_to_dcm(self, formaldehyde_xml):
        system = parse_spinxml(formaldehyde_xml).system
        converted = convert_rotations(system, "dcm")
        rots = [t.amplitude.rotation for t in converted.interactions
                if isinstance(t.amplitude, EigenAmplitude)]
        assert all(isinstance(r, DCM) for r in rots)
        for before, after in zip(system.interactions, converted.interactions):
            assert np.max(np.abs(promote_amplitude(before)
                                 - promote_amplitude(after))) < 1e-9


class TestSchemaValidation:
    def test_formaldehyde_clean(self, formaldehyde_xml):
        assert validate_against_schema(formaldehyde_xml) == []

    def test_all_variants_clean(self):
        assert validate_against_schema((FIXTURES / "all_variants.xml").read_bytes()) == []

    def test_two_rotation_children(self):
        doc = b'<spin_system><interaction kind="shielding" units="ppm" spin_1="1">' \
              b'<eigenvalues xx="1" yy="2" zz="3"/>' \
              b'<rotation><euler_angles alpha="0" beta="0" gamma="0"/></rotation>' \
              b'<rotation><euler_angles alpha="1" beta="0" gamma="0"/></rotation>' \
              b'</interaction></spin_system>'
        issues = validate_against_schema(doc)
        assert len(issues) == 1
        assert "more than one rotation" in issues[0].message

    def test_scalar_and_tensor_switch(self):
        doc = b'<spin_system><interaction kind="shielding" units="ppm" spin_1="1">' \
              b'<scalar>1</scalar><tensor xx="1" xy="0" xz="0" yx="0" yy="1" ' \
              b'yz="0" zx="0" zy="0" zz="1"/></interaction></spin_system>'
        issues = validate_against_schema(doc)
        assert len(issues) == 1
        assert "SWITCH" in issues[0].message

    def test_missing_units_flagged(self):
        doc = b'<spin_system><interaction kind="shielding" spin_1="1">' \
              b'<scalar>1</scalar></interaction></spin_system>'
        assert any("units" in i.message for i in validate_against_schema(doc))

    def test_unknown_element(self):
        doc = b'<spin_system><banana/></spin_system>'
        assert any("banana" in i.message for i in validate_against_schema(doc))

    def test_does_not_raise_on_garbage(self):
        issues = validate_against_schema(b"this is not xml")
        assert len(issues) == 1
