"""
Generating simulator input text
===============================

Only the spin system section is generated; the experiment setup is the
user's job.  SIMPSON covers nuclear systems (electrons are refused),
EasySpin and Spinach accept both; anything a target cannot express turns
into an explicit warning comment.
"""

import pathlib

from spinxml import export_easyspin, export_simpson, export_spinach, parse_spinxml

FIXTURES = pathlib.Path(__file__).parent.parent / "tests" / "fixtures"
system = parse_spinxml((FIXTURES / "formaldehyde.xml").read_bytes()).system

print("=== SIMPSON ===")
print(export_simpson(system))

print("=== EasySpin (liquid: isotropic projections) ===")
print(export_easyspin(system, "liquid"))

print("=== EasySpin (solid: full matrices) ===")
print(export_easyspin(system, "solid"))

print("=== Spinach ===")
print(export_spinach(system))
