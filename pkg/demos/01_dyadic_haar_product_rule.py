"""Dyadic intervals, Haar atoms, and the product rule, all in exact arithmetic.

Run:  python demos/01_dyadic_haar_product_rule.py
"""

from fractions import Fraction

from discrepancy_lab import (
    haar_atom,
    haar_eval,
    inner_product,
    make_interval,
    materialize,
    product_reduce,
)

# A dyadic interval is [a 2^-k, (a+1) 2^-k).  Level 0 is the whole [0,1).
j = make_interval(2, 3)
print(f"level-2 interval with offset 3: {j}, length {j.length}")

# The Haar function is -1 on the left half, +1 on the right, 0 outside.
h = haar_atom((0, 0))
for x in (Fraction(1, 4), Fraction(3, 4)):
    print(f"h_[0,1)({x}) = {haar_eval(h, [x])}")

# Exact grid materialization: every cell value is a rational number.
g = materialize(h, (3,))
print("cells of h on the 2^-3 grid:", g.num.tolist())
print("integral (exactly zero):", g.integral())

# Orthogonality is exact: distinct same-level intervals have disjoint
# supports, so the inner product vanishes; self inner product is |J|.
a, b = haar_atom((2, 1)), haar_atom((2, 2))
print("<h_a, h_b> =", inner_product(materialize(a, (3,)), materialize(b, (3,))))
print("<h_a, h_a> =", inner_product(materialize(a, (3,)), materialize(a, (3,))))

# The product rule: when the levels in every coordinate are pairwise
# distinct, a product of Haar functions is again a single signed Haar
# function on the intersection box.
p = product_reduce([haar_atom((0, 0)), haar_atom((1, 0))])
print(f"h_[0,1) * h_[0,1/2) = {p.sign:+d} * h on {p.box}")

# The same in three dimensions, checked pointwise on the refinement grid.
a3 = haar_atom((1, 0), (2, 0), (0, 0))
b3 = haar_atom((2, 0), (0, 0), (1, 0))
reduced = product_reduce([a3, b3])
res = (3, 3, 2)
lhs = materialize(a3, res) * materialize(b3, res)
print("3D product rule reproduces the pointwise product:",
      lhs.equals(materialize(reduced, res)))
