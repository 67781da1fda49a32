"""
Bohr-type sets and their square roots
=====================================

Y = {n = b mod q : |n/N - x| <= eps, ||theta n - z|| <= eps}.  Its square
roots split by sign mod q, and their pairwise sums hit the squares of a short
progression Q.
"""
from fractions import Fraction

import numpy as np

from rsl.bohr import (BohrSpec, bohr_elements, representation_report, parse_spec, prop51_check,
                      q_progression, sqrt_decomposition, sqrt_set, z_size_report)
from rsl.numtheory import TorusVector

spec = parse_spec("""
N = 1000000
q = 3
b = 1
x = 2.5
eps = 0.1
d = 1
theta_1 = 0.41421356237
z_1 = 0.25
""")
Y = bohr_elements(spec)
print(f"|Y| = {Y.size}, heuristic (2 eps)^(d+1) N / q = {spec.expected_size():.0f}")
print("sqrt(Y) from Y:", sqrt_set(Y).elements[:8], "...")
print("sqrt(Y) from Z sets agrees:", np.array_equal(sqrt_set(Y).elements, sqrt_decomposition(spec)))
print(z_size_report(spec))

# Q sits where z_+ + z_- lands, near (4x N)^(1/4); only visible for huge N.
big = BohrSpec(10**12, 1, 0, Fraction(5, 2), Fraction(1, 5), TorusVector.of(0.41421356237),
               TorusVector.of(0.5))
print("Q =", q_progression(big, corrected=True).elements())
print("centre (4x)^(1/4):", prop51_check(big, corrected=True))
print("centre (2x)^(1/4):", prop51_check(big, corrected=False))
print(representation_report(big))
