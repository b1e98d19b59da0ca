"""
Physics and render geometry
===========================

Dipolar tensors come from particle coordinates, bonds from a distance
check, and the scene document collects render-ready glyphs: ellipsoids
on nuclei or electrons, colored lines for J couplings and coils for
exchange.  NMR and EPR modes partition the visualizable interactions.
"""

import json
import pathlib

import numpy as np

from spinxml import Spin, build_scene, detect_bonds, dipolar_tensor, parse_spinxml
from spinxml.serialize import scene_to_dict

FIXTURES = pathlib.Path(__file__).parent.parent / "tests" / "fixtures"

# two protons 2 Angstrom apart: b = -15.0 kHz, D_zz = 2 b
h1 = Spin(id=1, isotope="1H", coordinates=np.zeros(3))
h2 = Spin(id=2, isotope="1H", coordinates=np.array([0.0, 0.0, 2.0]))
d = dipolar_tensor(h1, h2)
print("dipolar tensor (Hz):\n", np.round(d, 1))
print("coupling constant b = %.1f kHz" % (d[2, 2] / 2e3))
print("trace:", np.trace(d))

system = parse_spinxml((FIXTURES / "formaldehyde.xml").read_bytes()).system
print("\nbonds at 1.3 A:", detect_bonds(list(system.spins), 1.3))

scene = build_scene(system, mode="nmr", bond_threshold=1.3)
print("\nNMR scene: %d atoms, %d bonds, %d ellipsoids, %d J lines"
      % (len(scene.atoms), len(scene.bonds), len(scene.ellipsoids),
         len(scene.lines)))
for e in scene.ellipsoids:
    print("  ellipsoid on interaction", e.interaction_id,
          "semi-axes", np.round(e.semi_axes, 3),
          "signs", e.eigen_signs)

# the scene has a canonical JSON projection consumed by the editor UI
print("\nscene JSON keys:", sorted(scene_to_dict(scene)))
print(json.dumps(scene_to_dict(scene)["lines"], indent=2))
