"""Isotope data and physical constants.

Gyromagnetic ratios are in rad s^-1 T^-1 and were cross-checked against two
independent published compilations before being frozen here:

* R.K. Harris et al., "NMR nomenclature: nuclear spin properties and
  conventions for chemical shifts", Pure Appl. Chem. 73 (2001) 1795.
* N.J. Stone, "Table of nuclear magnetic dipole and electric quadrupole
  moments", At. Data Nucl. Data Tables 90 (2005) 75 (via the derived
  gamma values quoted in common NMR reference tables).

1H and the electron use the CODATA 2018 recommended values.  Spin-0 entries
(12C, 16O, 28Si, 32S) are kept so that non-magnetic atoms can participate in
visualization and bond detection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# CODATA 2018
MU0 = 1.25663706212e-6      # vacuum permeability, T m / A
HBAR = 1.054571817e-34      # reduced Planck constant, J s
PLANCK_H = 6.62607015e-34   # Planck constant, J s

ELECTRON_ISOTOPE = "E"

_ISOTOPE_RE = re.compile(r"^([0-9]*)([A-Za-z]+)$")


@dataclass(frozen=True)
class IsotopeRecord:
    """One isotope: symbol, element, spin quantum number and gamma."""

    symbol: str
    element: str
    spin: float           # spin quantum number (half-integer)
    gamma: float          # gyromagnetic ratio, rad s^-1 T^-1

    @property
    def magnetic(self) -> bool:
        return self.spin > 0 and self.gamma != 0.0


def _rec(symbol: str, spin: float, gamma: float) -> IsotopeRecord:
    m = _ISOTOPE_RE.match(symbol)
    if m is None:
        raise ValueError(f"bad isotope symbol {symbol!r}")
    return IsotopeRecord(symbol=symbol, element=m.group(2), spin=spin, gamma=gamma)


ISOTOPES: dict[str, IsotopeRecord] = {
    r.symbol: r
    for r in [
        _rec("1H", 0.5, 2.6752218744e8),     # CODATA 2018
        _rec("2H", 1.0, 4.10662791e7),
        _rec("12C", 0.0, 0.0),
        _rec("13C", 0.5, 6.728284e7),
        _rec("14N", 1.0, 1.9337792e7),
        _rec("15N", 0.5, -2.7126180e7),
        _rec("16O", 0.0, 0.0),
        _rec("17O", 2.5, -3.62808e7),
        _rec("19F", 0.5, 2.518148e8),
        _rec("23Na", 1.5, 7.0808493e7),
        _rec("27Al", 2.5, 6.9762715e7),
        _rec("28Si", 0.0, 0.0),
        _rec("29Si", 0.5, -5.3190e7),
        _rec("31P", 0.5, 1.08394e8),
        _rec("32S", 0.0, 0.0),
        _rec("33S", 1.5, 2.055685e7),
        _rec("35Cl", 1.5, 2.624198e7),
        # Unpaired electron; gamma_e = -g_e mu_B / hbar (CODATA 2018).
        IsotopeRecord(symbol=ELECTRON_ISOTOPE, element="E", spin=0.5,
                      gamma=-1.76085963023e11),
    ]
}

# Most abundant naturally occurring isotope per element, used when a file
# format supplies only element symbols.  Non-magnetic guesses are flagged by
# the importers so the user can retag (e.g. C -> 13C).
MOST_ABUNDANT_ISOTOPE: dict[str, str] = {
    "H": "1H",
    "C": "12C",
    "N": "14N",
    "O": "16O",
    "F": "19F",
    "Na": "23Na",
    "Al": "27Al",
    "Si": "28Si",
    "P": "31P",
    "S": "32S",
    "Cl": "35Cl",
}

# Atomic number -> element symbol, covering the range produced by the
# supported electronic-structure imports.
ELEMENT_BY_NUMBER: dict[int, str] = {
    1: "H", 2: "He", 3: "Li", 4: "Be", 5: "B", 6: "C", 7: "N", 8: "O",
    9: "F", 10: "Ne", 11: "Na", 12: "Mg", 13: "Al", 14: "Si", 15: "P",
    16: "S", 17: "Cl", 18: "Ar", 19: "K", 20: "Ca",
}


def parse_isotope(symbol: str) -> tuple[str, str] | None:
    """Split an isotope string into (mass number, element); None if malformed."""
    m = _ISOTOPE_RE.match(symbol)
    if m is None:
        return None
    return m.group(1), m.group(2)


def lookup(symbol: str) -> IsotopeRecord | None:
    """Return the isotope record for ``symbol``, or None if unknown."""
    return ISOTOPES.get(symbol)


def guess_isotope(element: str) -> str:
    """Most abundant isotope for an element symbol.

    Raises KeyError for elements outside the embedded table.
    """
    return MOST_ABUNDANT_ISOTOPE[element]
