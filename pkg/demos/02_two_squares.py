"""
Sums of two squares close to n
==============================

The balanced walk keeps |n1^2 + n2^2 - n| at order n^(1/4); restricting n1, n2
to progressions of modulus q costs a factor sqrt(N).
"""
import math

import numpy as np

from rsl.numtheory import Progression
from rsl.twosquares import approx_balanced, approx_constrained, approx_simple

for n in (27, 100, 1000, 10**6 + 1, 123456789012):
    s, b = approx_simple(n), approx_balanced(n)
    print(f"n={n:>13}  simple {s.as_row()[1:]}  balanced {b.as_row()[1:]}")

rng = np.random.default_rng(0)
ns = rng.integers(10**6, 10**12, size=2000)
ratios = [abs(approx_balanced(int(n)).error) / int(n) ** 0.25 for n in ns]
print("balanced walk: max |error| / n^(1/4) over 2000 samples =", round(max(ratios), 3))

# Constrained to multiples of q in [N, 2N]: the error constant |err|/sqrt(N) stays bounded.
for N in (500, 2000, 8000):
    P = Progression(1, 2, N, 3)
    targets = np.linspace(3.2 * N * N, 5.8 * N * N, 50).astype(np.int64)
    res = [approx_constrained(int(t), P, P, (3, 6)) for t in targets]
    worst = max(r.constant for r in res)
    print(f"N={N:5d}: slope {res[0].slope.a}/{res[0].slope.b}, max |err|/sqrt(N) = {worst:.2f}")
