"""
From a dense progression to squares
===================================
"""
from fractions import Fraction

import numpy as np

from rsl.bootstrap import chain_check, squares_sweep, sumset_subprogression
from rsl.colouring import search_2colouring
from rsl.numtheory import Progression

# Delete a tenth of a progression; the sumset still holds a long progression.
Q = Progression(7, 7 * 300, 1, 7)
rng = np.random.default_rng(1)
S = np.setdiff1d(Q.elements(), rng.choice(Q.elements(), 30, replace=False))
P = sumset_subprogression(Q, S)
print(f"|Q|={len(Q)}, |S|={S.size}, S+S contains {P.first}..{P.last} step {P.modulus} ({len(P)} terms)")

# Every n in a progression has n^2 = n1^2 + n2^2 - m1 - m2 with all parts in P1, P2;
# the two-squares walk certifies this once N is large enough.
print("N, walk failures, genuine failures")
for row in squares_sweep([300, 600, 1200, 2400, 4800], 3, (Fraction(1), Fraction(2)),
                         (Fraction(1), Fraction(2)), (1.5, 2.5)):
    print(*row)

# The inclusion chain inside the longest good 2-colouring.
print(chain_check(search_2colouring(31)))
