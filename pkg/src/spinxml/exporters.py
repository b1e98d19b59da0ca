"""Spin-system description text for SIMPSON, EasySpin and Spinach.

Only the spin system section is generated; experiment and pulse sequence
setup must be appended by the user.  Every exporter is total on valid
nuclear spin systems: content a target cannot express degrades to explicit
warning comments, never silent omission.  Values are printed with 12
significant digits and anisotropic terms are rendered through the
Haeberlen decomposition, zeta = lambda_zz - iso and
eta = (lambda_yy - lambda_xx)/zeta, stated again in the emitted comments.

Unit handling: kHz and MHz convert to the target's frequency unit; ppm
passes through unchanged.  Field units (Gauss, mT) would need gyromagnetic
context to become frequencies, so such terms are refused and reported as
warning comments instead of numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import (
    DegenerateConventionError,
    eigens_from_matrix,
    haeberlen_from_eigens,
)
from .geometry import dipolar_tensor
from .model import (
    EigenAmplitude,
    InteractionKind,
    InteractionTerm,
    ScalarAmplitude,
    SpinSystem,
    promote_amplitude,
    resolve_eigenvalues,
)
from . import isotopes
from .rotations import from_dcm

TARGETS = ("simpson", "easyspin", "spinach")
EASYSPIN_REGIMES = ("liquid", "slow-motion", "solid")

_ELECTRON_KINDS = frozenset({
    InteractionKind.GTENSOR, InteractionKind.HFC,
    InteractionKind.EXCHANGE, InteractionKind.ZFS,
})


class UnsupportedTargetError(ValueError):
    """Document content the selected target cannot represent at all."""


@dataclass(frozen=True)
class ExportOptions:
    target: str = "simpson"
    easyspin_regime: str = "liquid"

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown export target {self.target!r}")
        if self.easyspin_regime not in EASYSPIN_REGIMES:
            raise ValueError(f"unknown EasySpin regime {self.easyspin_regime!r}")


def _g(v: float) -> str:
    return f"{float(v):.12g}"


_HZ_FACTOR = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6}


def _to_hz(value: float, units: str) -> float | None:
    f = _HZ_FACTOR.get(units)
    return None if f is None else value * f


def _to_mhz(value: float, units: str) -> float | None:
    f = _HZ_FACTOR.get(units)
    return None if f is None else value * f / 1e6


def _haeberlen_parts(term: InteractionTerm):
    """(iso, zeta, eta, euler) of a term's promoted tensor; zeta and eta are
    zero for isotropic tensors."""
    m = promote_amplitude(term)
    es = eigens_from_matrix((m + m.T) / 2.0, "haeberlen")
    iso = float(np.mean(es.eigenvalues))
    try:
        h = haeberlen_from_eigens(es.eigenvalues)
        zeta = h.aniso * 2.0 / 3.0
        eta = h.asym
    except DegenerateConventionError:
        zeta, eta = 0.0, 0.0
    euler = from_dcm(es.rotation, "euler_angles")
    return iso, zeta, eta, euler


def _matrix_rows(m: np.ndarray) -> str:
    return "; ".join(" ".join(_g(v) for v in row) for row in m)


def export_simpson(sys: SpinSystem, dipoles_from_coordinates: bool = False) -> str:
    """Emit the spinsys section of a SIMPSON input file.

    Electron content cannot be expressed (SIMPSON is NMR only) and raises
    UnsupportedTargetError.  With ``dipoles_from_coordinates`` set, dipole
    lines are computed from particle coordinates for every magnetic nuclear
    pair that has no explicit dipolar term.
    """
    for spin in sys.spins:
        if spin.is_electron:
            raise UnsupportedTargetError(
                "electron spins present: SIMPSON export covers nuclear systems only")
    for term in sys.interactions:
        if term.kind in _ELECTRON_KINDS:
            raise UnsupportedTargetError(
                f"interaction kind {term.kind.value} is not representable in SIMPSON")

    comments = [
        "# SIMPSON spinsys section; append the par/pulseq sections yourself",
        "# anisotropy convention: zeta = lambda_zz - iso (Haeberlen), "
        "eta = (lambda_yy - lambda_xx)/zeta, Euler angles ZYZ active, degrees",
    ]
    magnetic = []
    for spin in sys.spins:
        rec = isotopes.lookup(spin.isotope)
        if rec is None:
            raise UnsupportedTargetError(f"spin {spin.id}: unknown isotope {spin.isotope!r}")
        if not rec.magnetic:
            comments.append(f"# spin {spin.id} ({spin.isotope}) is not magnetic; skipped")
        else:
            magnetic.append(spin)
    index = {spin.id: i + 1 for i, spin in enumerate(magnetic)}

    body: list[str] = []
    if magnetic:
        channels = list(dict.fromkeys(s.isotope for s in magnetic))
        body.append("channels " + " ".join(channels))
        body.append("nuclei " + " ".join(s.isotope for s in magnetic))

    explicit_dipoles: set[tuple[int, int]] = set()
    for term in sys.interactions:
        i = index.get(term.spin_1)
        j = index.get(term.spin_2) if term.spin_2 is not None else None
        if i is None or (term.spin_2 is not None and j is None):
            comments.append(f"# interaction {term.id} ({term.kind.value}) references "
                            "a non-magnetic spin; skipped")
            continue
        if term.kind in (InteractionKind.SHIELDING, InteractionKind.SHIFT):
            iso, zeta, eta, e = _haeberlen_parts(term)
            if term.units == "ppm":
                iso_s, zeta_s = _g(iso) + "p", _g(zeta) + "p"
            else:
                hz = _to_hz(1.0, term.units)
                if hz is None:
                    comments.append(f"# interaction {term.id}: units {term.units!r} "
                                    "not convertible; skipped")
                    continue
                iso_s, zeta_s = _g(iso * hz), _g(zeta * hz)
            if term.kind is InteractionKind.SHIELDING:
                comments.append(f"# shift {i}: absolute shielding values "
                                f"(reference {term.reference or 'unspecified'})")
            body.append(f"shift {i} {iso_s} {zeta_s} {_g(eta)} "
                        f"{_g(e.alpha)} {_g(e.beta)} {_g(e.gamma)}")
        elif term.kind is InteractionKind.JCOUPLING:
            hz = _to_hz(1.0, term.units)
            if hz is None:
                comments.append(f"# interaction {term.id}: units {term.units!r} "
                                "not convertible; skipped")
                continue
            iso, zeta, eta, e = _haeberlen_parts(term)
            body.append(f"jcoupling {i} {j} {_g(iso * hz)} {_g(zeta * hz)} {_g(eta)} "
                        f"{_g(e.alpha)} {_g(e.beta)} {_g(e.gamma)}")
        elif term.kind is InteractionKind.DIPOLAR:
            hz = _to_hz(1.0, term.units)
            if hz is None:
                comments.append(f"# interaction {term.id}: units {term.units!r} "
                                "not convertible; skipped")
                continue
            _iso, zeta, _eta, e = _haeberlen_parts(term)
            explicit_dipoles.add((min(i, j), max(i, j)))
            body.append(f"dipole {i} {j} {_g(zeta * hz / 2.0)} "
                        f"{_g(e.alpha)} {_g(e.beta)} {_g(e.gamma)}")
        elif term.kind is InteractionKind.QUADRUPOLAR:
            hz = _to_hz(1.0, term.units)
            if hz is None:
                comments.append(f"# interaction {term.id}: units {term.units!r} "
                                "not convertible; skipped")
                continue
            _iso, zeta, eta, e = _haeberlen_parts(term)
            comments.append(f"# quadrupole {i}: Cq taken as zeta of the stored tensor")
            body.append(f"quadrupole {i} 2 {_g(zeta * hz)} {_g(eta)} "
                        f"{_g(e.alpha)} {_g(e.beta)} {_g(e.gamma)}")
        else:  # spinrotation
            comments.append(f"# interaction {term.id} ({term.kind.value}) has no "
                            "SIMPSON spinsys representation")

    if dipoles_from_coordinates:
        for a in range(len(magnetic)):
            for b in range(a + 1, len(magnetic)):
                sa, sb = magnetic[a], magnetic[b]
                if sa.coordinates is None or sb.coordinates is None:
                    continue
                if (a + 1, b + 1) in explicit_dipoles:
                    continue
                d = dipolar_tensor(sa, sb)
                es = eigens_from_matrix(d, "haeberlen")
                zeta = es.eigenvalues[2] - float(np.mean(es.eigenvalues))
                e = from_dcm(es.rotation, "euler_angles")
                body.append(f"dipole {a + 1} {b + 1} {_g(zeta / 2.0)} "
                            f"{_g(e.alpha)} {_g(e.beta)} {_g(e.gamma)}")

    lines = comments + ["spinsys {"] + [f"  {ln}" for ln in body] + ["}"]
    return "\n".join(lines) + "\n"


def export_easyspin(sys: SpinSystem, opts: ExportOptions | str = "liquid") -> str:
    """Emit EasySpin Sys structure assignments as Matlab code.

    The regime selects the leading comment and which projections are
    written: liquid keeps isotropic parts only (discarded anisotropy is
    flagged), slow-motion and solid write full 3x3 matrices.  Unmappable
    kinds become warning comments.
    """
    regime = opts.easyspin_regime if isinstance(opts, ExportOptions) else opts
    if regime not in EASYSPIN_REGIMES:
        raise ValueError(f"unknown EasySpin regime {regime!r}")
    liquid = regime == "liquid"
    lines = [
        f"% EasySpin spin system ({regime} regime); append experiment setup yourself",
        "% anisotropy convention: zeta = lambda_zz - iso (Haeberlen)",
    ]
    electrons = [s for s in sys.spins if s.is_electron]
    nuclei = []
    for s in sys.spins:
        if s.is_electron:
            continue
        rec = isotopes.lookup(s.isotope)
        if rec is None or not rec.magnetic:
            lines.append(f"% spin {s.id} ({s.isotope}) is not magnetic; skipped")
        else:
            nuclei.append(s)
    e_index = {s.id: i + 1 for i, s in enumerate(electrons)}
    n_index = {s.id: i + 1 for i, s in enumerate(nuclei)}

    if electrons:
        spins = [isotopes.lookup(s.isotope).spin for s in electrons]
        lines.append("Sys.S = [" + " ".join(_g(v) for v in spins) + "];")
    else:
        lines.append("% no electron spins in document; Sys.S omitted")
    if nuclei:
        lines.append("Sys.Nucs = '" + ",".join(s.isotope for s in nuclei) + "';")

    def matrix_or_iso(term, target_unit_conv):
        m = promote_amplitude(term)
        if target_unit_conv is not None:
            m = m * target_unit_conv
        if not liquid:
            return f"[{_matrix_rows(m)}]", False
        iso = float(np.trace(m)) / 3.0
        sym = (m + m.T) / 2.0
        discarded = bool(np.max(np.abs(sym - np.eye(3) * iso)) > 1e-12 * max(1.0, abs(iso)))
        return _g(iso), discarded

    for term in sys.interactions:
        kind = term.kind
        if kind is InteractionKind.GTENSOR:
            if isinstance(term.amplitude, EigenAmplitude) and not liquid:
                evals = resolve_eigenvalues(term.amplitude.eigenvalues, kind)
                lines.append(f"Sys.g = [{' '.join(_g(v) for v in evals)}];"
                             f"   % principal values, electron {term.spin_1}")
            else:
                text, discarded = matrix_or_iso(term, None)
                lines.append(f"Sys.g = {text};   % electron {term.spin_1}")
                if discarded:
                    lines.append("% g anisotropy discarded in liquid regime")
        elif kind is InteractionKind.HFC:
            mhz = _to_mhz(1.0, term.units)
            if mhz is None:
                lines.append(f"% hfc interaction {term.id} in {term.units!r} not "
                             "converted (field-to-frequency needs gyromagnetic "
                             "context); restate it in MHz")
                continue
            nid = n_index.get(term.spin_2)
            if nid is None:
                lines.append(f"% hfc interaction {term.id} on a non-magnetic nucleus; skipped")
                continue
            text, discarded = matrix_or_iso(term, mhz)
            lines.append(f"Sys.A = {text};   % MHz, nucleus {nid} "
                         f"(spin {term.spin_2}), electron {e_index.get(term.spin_1, '?')}")
            if discarded:
                lines.append("% hyperfine anisotropy discarded in liquid regime")
        elif kind is InteractionKind.QUADRUPOLAR:
            if liquid:
                lines.append(f"% quadrupolar interaction {term.id} omitted in liquid regime")
                continue
            mhz = _to_mhz(1.0, term.units)
            if mhz is None:
                lines.append(f"% quadrupolar interaction {term.id} units {term.units!r} "
                             "not convertible; skipped")
                continue
            nid = n_index.get(term.spin_1)
            if nid is None:
                lines.append(f"% quadrupolar interaction {term.id} on a non-magnetic "
                             "nucleus; skipped")
                continue
            m = promote_amplitude(term) * mhz
            lines.append(f"Sys.Q = [{_matrix_rows(m)}];   % MHz, nucleus {nid}")
        elif kind is InteractionKind.ZFS:
            if liquid:
                lines.append(f"% zfs interaction {term.id} omitted in liquid regime")
                continue
            mhz = _to_mhz(1.0, term.units)
            if mhz is None:
                lines.append(f"% zfs interaction {term.id} units {term.units!r} "
                             "not convertible; skipped")
                continue
            m = promote_amplitude(term) * mhz
            lines.append(f"Sys.D = [{_matrix_rows(m)}];   % MHz, electron "
                         f"{e_index.get(term.spin_1, '?')}")
        elif kind is InteractionKind.EXCHANGE:
            mhz = _to_mhz(1.0, term.units)
            if mhz is None:
                lines.append(f"% exchange interaction {term.id} units {term.units!r} "
                             "not convertible; skipped")
                continue
            text, discarded = matrix_or_iso(term, mhz)
            lines.append(f"Sys.ee = {text};   % MHz, electrons "
                         f"{e_index.get(term.spin_1, '?')}-{e_index.get(term.spin_2, '?')}")
            if discarded:
                lines.append("% exchange anisotropy discarded in liquid regime")
        elif kind is InteractionKind.JCOUPLING:
            mhz = _to_mhz(1.0, term.units)
            if mhz is None:
                lines.append(f"% jcoupling interaction {term.id} units {term.units!r} "
                             "not convertible; skipped")
                continue
            a, b = n_index.get(term.spin_1), n_index.get(term.spin_2)
            if a is None or b is None:
                lines.append(f"% jcoupling interaction {term.id} references a "
                             "non-magnetic spin; skipped")
                continue
            text, discarded = matrix_or_iso(term, mhz)
            lines.append(f"Sys.nn = {text};   % MHz, nuclei {a}-{b}")
            if discarded:
                lines.append("% J anisotropy discarded in liquid regime")
        else:
            ref = f" (reference {term.reference})" if term.reference else ""
            lines.append(f"% {kind.value} interaction {term.id}{ref} has no "
                         "EasySpin field; not exported")
    return "\n".join(lines) + "\n"


def export_spinach(sys: SpinSystem) -> str:
    """Emit Spinach sys/inter assignments as Matlab code.

    Zeeman terms (shielding, shift, g-tensor) become per-spin matrices via
    the amplitude normal form; couplings go to scalar or matrix cells;
    coordinates are listed per spin.  Ordering follows the spin order.
    """
    n = len(sys.spins)
    index = {s.id: i + 1 for i, s in enumerate(sys.spins)}
    lines = [
        "% Spinach spin system description; append the experiment yourself",
        "sys.isotopes = {" + ",".join(f"'{s.isotope}'" for s in sys.spins) + "};",
        f"inter.zeeman.matrix = cell(1,{n});",
        f"inter.coupling.scalar = cell({n},{n});",
        f"inter.coupling.matrix = cell({n},{n});",
    ]
    zeeman_seen: set[int] = set()
    for term in sys.interactions:
        i = index.get(term.spin_1)
        j = index.get(term.spin_2) if term.spin_2 is not None else None
        if i is None or (term.spin_2 is not None and j is None):
            lines.append(f"% interaction {term.id} references an unknown spin; skipped")
            continue
        kind = term.kind
        if kind in (InteractionKind.SHIELDING, InteractionKind.SHIFT,
                    InteractionKind.GTENSOR):
            if i in zeeman_seen:
                lines.append(f"% spin {term.spin_1} has multiple Zeeman terms; "
                             "the later assignment wins")
            zeeman_seen.add(i)
            m = promote_amplitude(term)
            unit_note = term.units
            if term.reference is not None:
                unit_note += f", reference {term.reference}"
            lines.append(f"inter.zeeman.matrix{{{i}}} = [{_matrix_rows(m)}];"
                         f"   % {kind.value}, interaction {term.id} ({unit_note})")
        elif kind in (InteractionKind.JCOUPLING, InteractionKind.EXCHANGE) \
                and isinstance(term.amplitude, ScalarAmplitude):
            hz = _to_hz(term.amplitude.value, term.units)
            if hz is None:
                lines.append(f"% interaction {term.id} units {term.units!r} not "
                             "convertible to Hz; skipped")
                continue
            lines.append(f"inter.coupling.scalar{{{i},{j}}} = {_g(hz)};"
                         f"   % {kind.value}, interaction {term.id} (Hz)")
        elif kind is InteractionKind.SPINROTATION:
            lines.append(f"% spinrotation interaction {term.id} is not part of the "
                         "Spinach spin system description; skipped")
        else:
            hz = _to_hz(1.0, term.units)
            if hz is None:
                lines.append(f"% interaction {term.id} units {term.units!r} not "
                             "convertible to Hz; skipped")
                continue
            m = promote_amplitude(term) * hz
            a, b = (i, j) if j is not None else (i, i)
            lines.append(f"inter.coupling.matrix{{{a},{b}}} = [{_matrix_rows(m)}];"
                         f"   % {kind.value}, interaction {term.id} (Hz)")
    lines.append(f"inter.coordinates = cell({n},1);")
    for s in sys.spins:
        if s.coordinates is None:
            lines.append(f"% spin {s.id} has no coordinates; "
                         f"inter.coordinates{{{index[s.id]}}} left empty")
        else:
            x, y, z = s.coordinates
            lines.append(f"inter.coordinates{{{index[s.id]}}} = "
                         f"[{_g(x)} {_g(y)} {_g(z)}];")
    return "\n".join(lines) + "\n"


def export(sys: SpinSystem, opts: ExportOptions) -> str:
    """Dispatch to the target exporter."""
    if opts.target == "simpson":
        return export_simpson(sys)
    if opts.target == "easyspin":
        return export_easyspin(sys, opts)
    return export_spinach(sys)
