"""Sums of two squares close to a target, optionally from two progressions.

Three constructions, all returning a :class:`TwoSquareResult`:

* :func:`approx_simple` takes the largest square first and a small remainder;
* :func:`approx_balanced` walks n1 = m + k, n2 = m - k about m = floor(sqrt(n/2));
* :func:`approx_constrained` walks along a rational slope a/b inside two
  progressions P1, P2 of common modulus q, giving |n1^2 + n2^2 - n| = O(sqrt N).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import isqrt

from .errors import PreconditionError
from .numtheory import Progression


class BoxExitError(PreconditionError):
    """The constrained walk left P1 x P2 before crossing the target."""


class SlopeSelectionError(PreconditionError):
    """No admissible rational slope was found."""


@dataclass(frozen=True)
class SlopeChoice:
    """A rational slope a/b in the middle half of the admissible interval.

    ``t1, t2`` satisfy t1/t2 = a/b and t1^2 + t2^2 = gamma; ``margin`` is the
    smallest distance from t_i to the ends of its box.
    """

    a: int
    b: int
    t1: float
    t2: float
    margin: float
    interval: tuple[float, float]
    middle: tuple[float, float]


@dataclass(frozen=True)
class TwoSquareResult:
    n: int
    n1: int
    n2: int
    error: int
    k: int
    degenerate: bool = False
    constant: float | None = None
    slope: SlopeChoice | None = field(default=None, repr=False)
    bracket: tuple[int, int] | None = None
    max_step: int | None = None

    def as_row(self) -> tuple[int, int, int, int, int]:
        return (self.n, self.n1, self.n2, self.error, self.k)


def approx_simple(n: int) -> TwoSquareResult:
    """n1 = floor(sqrt n), n2 = floor(sqrt(n - n1^2)); n2 = 0 is flagged."""
    if n < 2:
        raise PreconditionError("n must be >= 2")
    n1 = isqrt(n)
    n2 = isqrt(n - n1 * n1)
    return TwoSquareResult(n, n1, n2, n1 * n1 + n2 * n2 - n, 0, degenerate=(n2 == 0))


def approx_balanced(n: int) -> TwoSquareResult:
    """Balanced walk n1(k) = m + k, n2(k) = m - k with m = floor(sqrt(n/2)).

    Since n1(k)^2 + n2(k)^2 = 2m^2 + 2k^2, the crossing index is found in
    closed form; the result is the k on either side of the crossing with the
    smaller |error| (smaller k on ties), so |error| <= 2k + 1 <= 4 sqrt(n) + 2.
    """
    if n < 2:
        raise PreconditionError("n must be >= 2")
    m = isqrt(n // 2)
    k_lo = isqrt((n - 2 * m * m) // 2)
    best = None
    for k in (k_lo, k_lo + 1):
        if k > m:
            continue
        err = 2 * m * m + 2 * k * k - n
        if best is None or abs(err) < abs(best[1]):
            best = (k, err)
    k, err = best
    return TwoSquareResult(n, m + k, m - k, err, k, degenerate=(m - k == 0))


def slope_interval(gamma: float, bounds) -> tuple[float, float]:
    """The interval of ratios t1/t2 with t1^2 + t2^2 = gamma inside the box."""
    a1, b1, a2, b2 = map(float, bounds)
    if not (a1 < b1 and a2 < b2):
        raise PreconditionError("box needs alpha_i < beta_i")
    if not a1 * a1 + a2 * a2 < gamma < b1 * b1 + b2 * b2:
        raise PreconditionError("gamma must lie strictly between the corner radii")
    lo = max(a1, math.sqrt(max(0.0, gamma - b2 * b2)))
    hi = min(b1, math.sqrt(gamma - a2 * a2))
    if not lo < hi:
        raise PreconditionError("empty slope interval")
    if gamma - hi * hi <= 0:
        raise PreconditionError("slope interval is unbounded (t2 can reach 0)")
    return lo / math.sqrt(gamma - lo * lo), hi / math.sqrt(gamma - hi * hi)


def select_slope(gamma: float, bounds, height: int = 64) -> SlopeChoice:
    """Least-height rational a/b (least b, then least a) in the middle half.

    The middle half is the closed central subinterval of half the length.
    Raises :class:`SlopeSelectionError` when none has a, b <= height.
    """
    lam_lo, lam_hi = slope_interval(gamma, bounds)
    centre, quarter = (lam_lo + lam_hi) / 2, (lam_hi - lam_lo) / 4
    m_lo, m_hi = centre - quarter, centre + quarter
    for b in range(1, height + 1):
        a = max(1, math.ceil(m_lo * b))
        if a > height:
            break
        if a <= m_hi * b:
            g = math.gcd(a, b)
            a, b = a // g, b // g
            lam = a / b
            root = math.sqrt(gamma / (1 + lam * lam))
            t1, t2 = lam * root, root
            a1, b1, a2, b2 = map(float, bounds)
            margin = min(t1 - a1, b1 - t1, t2 - a2, b2 - t2)
            return SlopeChoice(a, b, t1, t2, margin, (lam_lo, lam_hi), (m_lo, m_hi))
    raise SlopeSelectionError(f"no rational of height <= {height} in [{m_lo:.6g}, {m_hi:.6g}]")


def _check_pair(P1: Progression, P2: Progression) -> tuple[int, int]:
    if P1.modulus != P2.modulus:
        raise PreconditionError("P1 and P2 must share the modulus q")
    if P1.scale != P2.scale or P1.scale.denominator != 1:
        raise PreconditionError("P1 and P2 must share an integer scale N")
    return int(P1.scale), P1.modulus


def approx_constrained(n: int, P1: Progression, P2: Progression, gammas,
                       height: int = 64, max_height: int = 4096) -> TwoSquareResult:
    """n1 in P1, n2 in P2 with |n1^2 + n2^2 - n| = O(sqrt N).

    With gamma = n / N^2 and a slope a/b from :func:`select_slope`, walks

        n1(k) = q floor(t1 N / q) + q k b,   n2(k) = q floor(t2 N / q) - q k a

    for k = 0, 1, ... until n1^2 + n2^2 first exceeds n and returns whichever
    side of the crossing is closer.  ``constant`` is |error| / sqrt(N).
    """
    N, q = _check_pair(P1, P2)
    g1, g2 = map(float, gammas)
    a1, b1 = P1.bounds
    a2, b2 = P2.bounds
    if not a1 * a1 + a2 * a2 < g1 < g2 < b1 * b1 + b2 * b2:
        raise PreconditionError("need alpha1^2 + alpha2^2 < gamma1 < gamma2 < beta1^2 + beta2^2")
    gamma = n / (N * N)
    if not g1 <= gamma <= g2:
        raise PreconditionError("n / N^2 must lie in [gamma1, gamma2]")

    h = height
    while True:
        try:
            slope = select_slope(gamma, (a1, b1, a2, b2), h)
            break
        except SlopeSelectionError:
            if h >= max_height:
                raise
            h *= 2
    a, b = slope.a, slope.b
    f1 = math.floor(slope.t1 * N / q)
    f2 = math.floor(slope.t2 * N / q)
    # guard against rounding in t_i * N pushing the start past n
    while (q * f1) ** 2 + (q * f2) ** 2 > n:
        f1 -= 1

    def pair(k):
        return q * f1 + q * k * b, q * f2 - q * k * a

    def total(k):
        x, y = pair(k)
        return x * x + y * y

    k, s_prev, max_step = 0, total(0), 0
    while True:
        x, y = pair(k + 1)
        if x > P1.last or y < P2.first:
            raise BoxExitError(f"walk left the box at k={k + 1} before crossing n (N too small?)")
        s_next = x * x + y * y
        max_step = max(max_step, abs(s_next - s_prev))
        k += 1
        if s_next > n:
            break
        s_prev = s_next

    below, above = k - 1, k
    cands = sorted((below, above), key=lambda kk: (abs(total(kk) - n), kk))
    for kk in cands:
        x, y = pair(kk)
        if x in P1 and y in P2:
            err = x * x + y * y - n
            return TwoSquareResult(n, x, y, err, kk, constant=abs(err) / math.sqrt(N), slope=slope,
                                   bracket=(s_prev, s_next), max_step=max_step)
    raise BoxExitError("crossing point lies outside P1 x P2 (N too small?)")
