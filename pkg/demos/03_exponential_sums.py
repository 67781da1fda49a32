"""
Weyl sums and the sixth moment of the squares
=============================================
"""
import math
from fractions import Fraction

from rsl.expsums import PolynomialPhase, moment_report, squares_upto, weyl_check, weyl_sum
from rsl.numtheory import TorusVector

print("sum_{n<8} e(n^2/4) =", weyl_sum(PolynomialPhase((Fraction(1, 4), 0, 0)), (0, 7)))

# A large normalised sum goes with a good rational approximation.
for name, theta in (("1/4", Fraction(1, 4)), ("1/7", Fraction(1, 7)),
                    ("golden", (math.sqrt(5) - 1) / 2), ("sqrt2", math.sqrt(2))):
    rep = weyl_check(TorusVector.of(theta), [1], 2, (1, 4000))
    print(f"theta={name:7s} delta={rep.delta:.4f}  best q={rep.q:5d}  ||q theta||={rep.distance:.2e}")

# sum_x r_3(x)^2 for the squares grows like N^2.
for N in (10**2, 10**3, 10**4, 10**5, 10**6):
    rep = moment_report(squares_upto(N))
    print(f"N={N:>8}  sixth moment={rep['sixth_moment']:>16}  / N^2 = {rep['ratio_to_N2']:.4f}")
