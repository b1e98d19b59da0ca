"""
Importing electronic-structure output
=====================================

Gaussian logs contribute coordinates (last table wins in geometry
optimizations), GIAO shielding tensors and the total J matrix; magres
files contribute atoms and shielding; XYZ files contribute coordinates
with guessed isotopes.  Weak interactions can be dropped at import by a
Frobenius-norm threshold in the source block's own units.
"""

import pathlib

from spinxml import (
    ImportOptions,
    filter_by_norm,
    import_gaussian_log,
    import_magres,
    import_xyz,
)

FIXTURES = pathlib.Path(__file__).parent.parent / "tests" / "fixtures"

report = import_gaussian_log((FIXTURES / "formaldehyde_giao.log").read_text())
system = report.system
print("atoms:", [s.isotope for s in system.spins])
print("interactions:", [(t.kind.value, t.spin_1, t.spin_2)
                        for t in system.interactions])
for w in report.warnings:
    print("warning:", w.location, "-", w.message)

# a 60 Hz threshold drops the 29.13 Hz coupling (norm 29.13*sqrt(3) = 50.45)
# but keeps both 256.9 Hz couplings
filtered = import_gaussian_log((FIXTURES / "formaldehyde_giao.log").read_text(),
                               ImportOptions(norm_threshold=60.0)).system
print("\nJ terms after 60 Hz threshold:",
      [(t.spin_1, t.spin_2, t.amplitude.value)
       for t in filtered.interactions if t.kind.value == "jcoupling"])

# the same filter works on any document, spins are never removed
refiltered = filter_by_norm(system, 445.0)
print("terms above 445:", len(refiltered.interactions),
      "of", len(system.interactions))

xyz = import_xyz((FIXTURES / "formaldehyde.xyz").read_text())
print("\nxyz isotope guesses:", [s.isotope for s in xyz.system.spins])
for w in xyz.warnings:
    print("warning:", w.location, "-", w.message)

magres = import_magres((FIXTURES / "formaldehyde_new.magres").read_text())
print("\nmagres atoms:", [s.isotope for s in magres.system.spins],
      "terms:", [t.kind.value for t in magres.system.interactions])
