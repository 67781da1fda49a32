"""
Colouring [1, n] so that x + y = z^2 has no monochromatic solution
=================================================================

Three colours suffice forever; two colours run out quickly.
"""
import numpy as np

from rsl.colouring import (count_mono_mod_p, dyadic_block_colours, dyadic_colouring,
                           find_mono_solutions, search_2colouring, threshold_2colouring)

# The dyadic colouring gives each block [2^i, 2^(i+1)) one colour.
print("block colours:", dyadic_block_colours(15))

c = dyadic_colouring(10**6)
sols = find_mono_solutions(c, include_trivial=True)
print("monochromatic solutions up to 10^6:", [s.triple for s in sols])

# With two colours a backtracking search finds the breaking point.
n_star = threshold_2colouring()
print("no good 2-colouring of [1, n] once n =", n_star)
good = search_2colouring(n_star - 1)
print(good.to_text())

# Modulo a prime every colouring has solutions, e.g. x = y = z = 0.
for p in (5, 7, 11, 13):
    cols = np.arange(p) % 3
    print(f"p={p:2d}: {count_mono_mod_p(cols)} monochromatic solutions for colour n mod 3")
