"""
Smooth cutoffs and their Fourier coefficients
=============================================

Smooth or trapezoidal majorants of [N, 2N) have Fourier l1 norms bounded in
N; the sharp indicator grows like log N.
"""
from rsl.smoothcut import (bump_constant, indicator_cutoff, interval_majorant, l1_fourier_norm,
                           torus_fourier_decay, torus_majorant, torus_minorant)

print("bump normalising constant C =", bump_constant())

print("   N   smooth  trapezoid  sharp")
for j in range(6, 13):
    N = 2**j
    s = l1_fourier_norm(interval_majorant(N, "smooth"))
    t = l1_fourier_norm(interval_majorant(N, "trapezoid"))
    h = l1_fourier_norm(indicator_cutoff(N, 2 * N))
    print(f"{N:5d}  {s:.4f}  {t:.4f}     {h:.3f}")

# Torus majorant and minorant of the eps-ball; coefficient sums converge.
for eps in (0.05, 0.1, 0.2):
    up, down = torus_majorant(eps, 1), torus_minorant(eps, 1)
    _, rep = torus_fourier_decay(up, 2048)
    print(f"eps={eps}: mass ratios {up.integral() / (2 * eps):.3f} / {down.integral() / (2 * eps):.3f}, "
          f"sum |c_r| |r| = {rep.partial_sum:.3f}, fitted decay exponent {rep.exponent:.2f}")
