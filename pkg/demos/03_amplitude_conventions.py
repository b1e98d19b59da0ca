"""
Eigenvalue conventions and the representation bundle
====================================================

The same tensor can be reported as explicit eigenvalues, as isotropic
part + anisotropy + asymmetry (Haeberlen), as axiality/rhombicity or as
span/skew (Maryland).  The representation bundle keeps every view of one
tensor consistent, which is what drives an interactive edit dialog.
"""

import numpy as np

from spinxml import (
    bundle_from_eigens,
    eigens_from_spanskew,
    frobenius_norm,
    haeberlen_from_eigens,
    recompute_views,
    spanskew_from_eigens,
    spherical_from_matrix,
)
from spinxml.rotations import EulerAngles

evals = [20.2, 21.8, 22.2]
print("eigenvalues:", evals)
print("haeberlen:", haeberlen_from_eigens(evals))
print("span/skew (shielding):", spanskew_from_eigens(evals, "shielding"))
print("span/skew (shift):    ", spanskew_from_eigens(evals, "shift"))

# inverting span/skew: same eigenvalues back, in the convention's ordering
ss = spanskew_from_eigens(evals, "shielding")
print("inverted:", eigens_from_spanskew(*ss, "shielding"))

# a bundle holds matrix, eigen, rotation, spherical and Wigner views at once
b = bundle_from_eigens(evals, EulerAngles(230.4, 0.0, 0.0))
print("\nbundle matrix:\n", np.round(b.matrix, 4))
print("bundle euler:", b.euler)
print("bundle quaternion:", b.quaternion)
print("rank-2 spherical:", np.round(b.spherical.rank2, 4))
print("frobenius norm:", frobenius_norm(b.matrix))

# editing one view recomputes all others; eigenvalue edits keep the
# orientation, orientation edits keep the eigenvalues
b2 = recompute_views(b, "eigenvalues", [30.0, 31.0, 32.0])
print("\nafter eigenvalue edit, euler unchanged:", b2.euler)
b3 = recompute_views(b2, "euler", (10.0, 20.0, 30.0))
print("after euler edit, eigenvalues unchanged:", b3.eigenvalues)

# degenerate tensors mark convention-specific views as undefined (None)
iso = bundle_from_eigens([5.0, 5.0, 5.0], np.eye(3))
print("\nisotropic tensor: haeberlen =", iso.haeberlen,
      " span/skew =", iso.spanskew)

# the rank-2 components transform under the bundle's own Wigner matrix
rot = b.dcm
t2_direct = spherical_from_matrix(rot @ np.diag(evals) @ rot.T).rank2
t2_wigner = b.wigner @ spherical_from_matrix(np.diag(evals)).rank2
print("equivariance defect:", np.max(np.abs(t2_direct - t2_wigner)))
