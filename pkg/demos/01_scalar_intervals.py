"""Midpoint-radius intervals in one minute.

Every quantity is a disk <mid, rad>: the set of numbers within rad of mid.
Arithmetic widens results outward so the exact value of any member
computation is always inside, whatever floating point does.
"""

import numpy as np

from sylvenc import Disk, IMatrix, im_matmul, iv_mag, iv_meet, iv_mul

x = Disk(2.0, 0.1)
y = Disk(3.0, 0.2)

print("x          =", x)
print("y          =", y)
print("x * y      =", iv_mul(x, y))
print("Mag(x)     =", iv_mag(x), "  (largest magnitude of any member)")
print("x meet y2  =", iv_meet(Disk(2.0, 0.1), Disk(2.0, 0.5)), " (tighter operand wins)")

# every sampled member product stays inside the product disk
rng = np.random.default_rng(0)
prod = iv_mul(x, y)
for _ in range(1000):
    a = x.mid + x.rad * rng.uniform(-1, 1)
    b = y.mid + y.rad * rng.uniform(-1, 1)
    assert prod.contains(a * b)
print("1000 sampled member products contained: True")

# the same guarantee holds for matrix products
X = IMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]), np.full((2, 2), 0.01))
Y = IMatrix(np.array([[3.0, 0.0], [1.0, 1.0]]), np.full((2, 2), 0.02))
P = im_matmul(X, Y)
for _ in range(200):
    a = X.mid + X.rad * rng.uniform(-1, 1, size=(2, 2))
    b = Y.mid + Y.rad * rng.uniform(-1, 1, size=(2, 2))
    assert P.contains_point(a @ b)
print("200 sampled member matrix products contained: True")
print("product radii:\n", P.rad)
