"""
The four rotation conventions
=============================

Euler angles (ZYZ, active, degrees), angle-axis, unit quaternion and the
direction cosine matrix all describe the same rotation; conversions go
through the DCM and land in canonical form (quaternion w >= 0,
angle in [0, 180], Euler beta in [0, 180]).
"""

import numpy as np

from spinxml import EulerAngles, compose, from_dcm, inverse, to_dcm, wigner_d2

r = EulerAngles(alpha=230.4, beta=11.25, gamma=301.5)
m = to_dcm(r)
print("DCM:\n", np.round(m, 6))

for tag in ("euler_angles", "angle_axis", "quaternion", "dcm"):
    print(tag, "->", from_dcm(m, tag))

# conversions commute with composition
a, b = EulerAngles(40, 30, 0), EulerAngles(0, 0, 75)
print("group law defect:",
      np.max(np.abs(compose(a, b) - to_dcm(a) @ to_dcm(b))))
print("inverse defect:",
      np.max(np.abs(compose(a, inverse(a)) - np.eye(3))))

# the rank-2 Wigner matrix of the same rotation (5x5, m = -2..+2);
# it is unitary and represents the rotation on irreducible rank-2
# spherical components
d = wigner_d2(r)
print("wigner unitarity defect:",
      np.max(np.abs(d @ d.conj().T - np.eye(5))))
print("wigner of the identity is the identity:",
      np.allclose(wigner_d2(np.eye(3)), np.eye(5)))
