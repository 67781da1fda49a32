"""Finitary steps of the bootstrap from a progression to all large multiples of q.

* :func:`sumset_subprogression`: a dense subset S of a progression Q has S + S
  containing a long subprogression of Q + Q with the same difference;
* :func:`lemma64_verify`: every n in P([g1, g2]; N, q) has
  n^2 in P1^2 + P2^2 - P1 - P2, via the constrained two-squares walk;
* :func:`chain_check`: the inclusions sqrt(2V) in W, sqrt(2 sqrt(2V)) in V and
  sqrt(2 sqrt(2 sqrt(2V))) in W for a good 2-colouring V, W of [1, n].
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .colouring import TRIVIAL, Colouring, find_mono_solutions
from .errors import BudgetExceeded, ConstructionError, PreconditionError, RslError
from .numtheory import DEFAULT_ELEMENT_BUDGET, Progression
from .twosquares import approx_constrained


def _index_sumset(idx: np.ndarray, m: int) -> np.ndarray:
    """Boolean array over 2..2m: which index sums occur (exact integer convolution)."""
    ind = np.zeros(m + 1, dtype=np.int64)
    ind[idx] = 1
    return np.convolve(ind, ind) > 0


def sumset_window(m: int) -> tuple[int, int]:
    """Integers x with m/5 + 2 < x < 2m - m/5 - 2."""
    lo = math.floor(Fraction(m, 5) + 2) + 1
    hi = math.ceil(2 * m - Fraction(m, 5) - 2) - 1
    return lo, hi


def sumset_subprogression(Q: Progression, S) -> Progression:
    """A progression of difference q inside S + S with at least |Q| terms.

    Q is indexed as {1, ..., m}; every index sum in the window
    (m/5 + 2, 2m - m/5 - 2) is realised when |S| >= 9m/10, and each element
    of the returned progression is checked against S + S.
    """
    elems = Q.elements()
    m = len(elems)
    if m < 100:
        raise PreconditionError("Q must have at least 100 elements")
    S = np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))
    if S.size and not np.all(Q.contains_array(S)):
        raise PreconditionError("S must be a subset of Q")
    if 10 * S.size < 9 * m:
        raise PreconditionError("S must contain at least 9/10 of Q")
    first, D = int(elems[0]), Q.modulus
    idx = (S - first) // D + 1
    sums = _index_sumset(idx, m)
    lo, hi = sumset_window(m)
    if not sums[lo: hi + 1].all():
        bad = lo + int(np.flatnonzero(~sums[lo: hi + 1])[0])
        raise ConstructionError(f"index sum {bad} missing from S + S")
    if hi - lo + 1 < m:
        raise ConstructionError("window shorter than |Q|")
    a = 2 * first + (lo - 2) * D
    b = 2 * first + (hi - 2) * D
    return Progression(Fraction(a) / Q.scale, Fraction(b) / Q.scale, Q.scale, D)


# --------------------------------------------------------------------------
# squares from two progressions

@dataclass(frozen=True)
class SquaresFailure:
    n: int
    reason: str
    member: bool | None = None


@dataclass(frozen=True)
class SquaresReport:
    N: int
    q: int
    checked: int
    failures: tuple = ()
    max_constant: float = 0.0

    @property
    def ok(self) -> bool:
        """Every n certified, by the walk or by the exhaustive fallback."""
        return all(f.member is True for f in self.failures)

    @property
    def walk_ok(self) -> bool:
        return not self.failures

    @property
    def genuine(self) -> tuple:
        """Failures confirmed by exhaustive search (n^2 really not in the set)."""
        return tuple(f for f in self.failures if f.member is False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        d["walk_ok"] = self.walk_ok
        return d


def _shape_check(P1: Progression, P2: Progression, gammas):
    if P1.modulus != P2.modulus or P1.scale != P2.scale or P1.scale.denominator != 1:
        raise PreconditionError("P1 and P2 need the same modulus and integer scale N")
    g1, g2 = map(float, gammas)
    a1, b1 = P1.bounds
    a2, b2 = P2.bounds
    if not math.hypot(a1, a2) < g1 < g2 < math.hypot(b1, b2):
        raise PreconditionError("need sqrt(a1^2 + a2^2) < gamma1 < gamma2 < sqrt(b1^2 + b2^2)")
    return int(P1.scale), P1.modulus, g1, g2


def in_square_difference_set(n: int, P1: Progression, P2: Progression,
                             budget: int = 10**8) -> bool:
    """Exhaustively decide whether n^2 = n1^2 + n2^2 - m1 - m2 with n1, m1 in P1, n2, m2 in P2."""
    e1, e2 = P1.elements(), P2.elements()
    if e1.size * e2.size > budget:
        raise BudgetExceeded("exhaustive check exceeds budget")
    if e1.size == 0 or e2.size == 0:
        return False
    q = P1.modulus
    lo, hi = int(e1[0] + e2[0]), int(e1[-1] + e2[-1])
    sq2 = e2.astype(object) ** 2 if e1[-1] > 2**31 else e2 * e2
    target = n * n
    for a in e1.tolist():
        D = a * a + sq2 - target
        if np.any((D >= lo) & (D <= hi) & (D % q == 0)):
            return True
    return False


def lemma64_verify(P1: Progression, P2: Progression, gammas, exhaustive: bool = True,
                   budget: int = DEFAULT_ELEMENT_BUDGET, exhaustive_budget: int = 10**8) -> SquaresReport:
    """Check P([g1, g2]; N, q) against sqrt(P1^2 + P2^2 - P1 - P2).

    For each n the walk targets n^2 + s0, with s0 the middle of the
    progression P1 + P2, and the excess n1^2 + n2^2 - n^2 is then split as
    m1 + m2.  Any n where this fails is listed; with ``exhaustive`` each
    failure is also settled by a full search.
    """
    N, q, g1, g2 = _shape_check(P1, P2, gammas)
    a1, b1 = P1.bounds
    a2, b2 = P2.bounds
    # two-squares window strictly inside the admissible range
    w_lo = (a1 * a1 + a2 * a2 + g1 * g1) / 2
    w_hi = (b1 * b1 + b2 * b2 + g2 * g2) / 2
    T = Progression(Fraction(str(g1)), Fraction(str(g2)), N, q).elements(budget)
    lo_s, hi_s = P1.first + P2.first, P1.last + P2.last
    s0 = q * ((lo_s + hi_s) // (2 * q))
    failures = []
    worst = 0.0
    for n in T.tolist():
        reason = None
        try:
            res = approx_constrained(n * n + s0, P1, P2, (w_lo, w_hi))
            D = res.n1 ** 2 + res.n2 ** 2 - n * n
            worst = max(worst, res.constant)
            if not (lo_s <= D <= hi_s and D % q == 0):
                reason = f"excess {D} outside P1 + P2"
            else:
                m1 = max(P1.first, D - P2.last)
                m2 = D - m1
                if m1 not in P1 or m2 not in P2:
                    reason = f"could not split excess {D}"
        except RslError as exc:
            reason = f"{type(exc).__name__}: {exc}"
        if reason is not None:
            member = None
            if exhaustive:
                try:
                    member = in_square_difference_set(n, P1, P2, exhaustive_budget)
                except BudgetExceeded:
                    member = None
            failures.append(SquaresFailure(n, reason, member))
    return SquaresReport(N, q, len(T), tuple(failures), worst)


def squares_sweep(Ns, q: int, bounds1, bounds2, gammas, exhaustive: bool = True) -> list[tuple[int, int, int]]:
    """(N, walk failures, genuine failures) for each N with a fixed shape."""
    out = []
    for N in Ns:
        P1 = Progression(bounds1[0], bounds1[1], N, q)
        P2 = Progression(bounds2[0], bounds2[1], N, q)
        rep = lemma64_verify(P1, P2, gammas, exhaustive=exhaustive)
        out.append((N, len(rep.failures), len(rep.genuine)))
    return out


# --------------------------------------------------------------------------
# colouring chain

@dataclass(frozen=True)
class ChainReport:
    """Inclusion flags on the ranges where each level is fully determined.

    ``ranges[i]`` is the largest z for which level i + 1 is complete; a flag
    is None when that range is empty.
    """

    colouring_id: str
    n_max: int
    ranges: tuple
    flags: tuple
    counterexample: tuple | None = None
    levels: tuple = field(default=(), repr=False)

    @property
    def ok(self) -> bool:
        return all(f is not False for f in self.flags)

    @property
    def testable(self) -> bool:
        return any(f is not None for f in self.flags)


def colouring_id(c: Colouring) -> str:
    return hashlib.sha256(c.to_text().encode()).hexdigest()[:16]


def _sqrt_of_sumset(X: np.ndarray, limit: int) -> np.ndarray:
    """{z <= limit : z^2 = x + x' for x, x' in X}, skipping 2 + 2 = 2^2."""
    out = []
    Xs = set(X.tolist())
    for z in range(1, limit + 1):
        s = z * z
        for x in X.tolist():
            if x > s // 2:
                break
            if (s - x) in Xs and (x, s - x, z) != TRIVIAL:
                out.append(z)
                break
    return np.array(out, dtype=np.int64)


def chain_check(c: Colouring, strict: bool = True) -> ChainReport:
    """Check the three inclusions for V = colour 0, W = colour 1.

    Level one is complete for z^2 <= 2 n_max; each later level is complete up
    to the square root of the previous range.  With ``strict`` an inclusion
    failure raises :class:`ConstructionError`, since it contradicts the
    absence of monochromatic solutions.
    """
    if c.k != 2 or c.lo != 1:
        raise PreconditionError("expects a 2-colouring of [1, n_max]")
    if find_mono_solutions(c):
        raise PreconditionError("colouring has a nontrivial monochromatic solution")
    n = c.hi
    V, W = c.colour_class(0), c.colour_class(1)
    classes = [W, V, W]
    X = V
    limits, flags, levels = [], [], []
    counter = None
    limit = 2 * n
    for level, target in enumerate(classes, 1):
        # sums of X are known up to the range of X itself
        limit = math.isqrt(limit)
        limits.append(limit)
        X = _sqrt_of_sumset(X[X <= limit * limit], limit) if limit >= 1 else np.zeros(0, dtype=np.int64)
        levels.append(X)
        if limit < 1 or X.size == 0:
            flags.append(None if limit < 1 else True)
            continue
        bad = X[~np.isin(X, target)]
        flags.append(bad.size == 0)
        if bad.size and counter is None:
            counter = (level, int(bad[0]))
    rep = ChainReport(colouring_id(c), n, tuple(limits), tuple(flags), counter, tuple(levels))
    if strict and not rep.ok:
        raise ConstructionError(f"inclusion failed at level {counter[0]} for z = {counter[1]}")
    return rep
