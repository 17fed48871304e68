"""Exact star and L2 discrepancy of classical point sets.

The discrepancy function D_N(x) = N vol([0,x)) - #(P in [0,x)) is evaluated
with exact rational coordinates, so the star discrepancy (a supremum over
anchored boxes) comes out as an exact fraction with a witness corner.

Run:  python demos/02_discrepancy_of_point_sets.py
"""

import math

from discrepancy_lab import (
    generate,
    l2_discrepancy_exact,
    l2_discrepancy_sq_exact,
    star_discrepancy_exact,
)

print("van der Corput (1D), growing N:")
for m in range(2, 8):
    ps = generate("vanDerCorput", 2 ** m, 1)
    rep = star_discrepancy_exact(ps)
    print(f"  N={ps.size:4d}  D*_N = {rep.value_exact}  "
          f"witness {rep.witness} ({rep.semantics})")

print("\n2D van der Corput set {(i/N, phi_2(i))} vs random points:")
for m in (4, 6, 8):
    n_points = 2 ** m
    vdc = generate("vanDerCorput", n_points, 2)
    rnd = generate("random", n_points, 2, seed=m)
    s_vdc = star_discrepancy_exact(vdc).value
    s_rnd = star_discrepancy_exact(rnd).value
    print(f"  N={n_points:4d}  vdC {s_vdc:8.4f}   random {s_rnd:8.4f}   "
          f"log2(N) = {m}")

print("\nL2 discrepancy (pairwise closed form) sits below the star discrepancy:")
ps = generate("hammersley", 32, 3)
l2 = l2_discrepancy_exact(ps)
star = star_discrepancy_exact(ps)
print(f"  Hammersley N=32, d=3:  ||D_N||_2 = {l2:.6f}  <=  D*_N = {star.value:.6f}")
print(f"  exact squares: {float(l2_discrepancy_sq_exact(ps)):.6f} vs "
      f"{float(star.value_exact ** 2):.6f}")

# the classical lower bound landscape: Roth gives (log N)^((d-1)/2) in L2,
# Schmidt gives log N in d=2, and the three-dimensional gain over Roth is
# what the rest of this library quantifies
n_points = 32
print(f"\nfor N = {n_points}: log(N) = {math.log(n_points):.3f}, "
      f"sqrt(log N) = {math.sqrt(math.log(n_points)):.3f}")
