"""Number-theoretic and diophantine primitives.

Torus norms, square-root counts modulo q, (A, N)-irrationality, best rational
approximation and the progressions P(I; N, q) = {n : n/N in I, q | n}.

Reals may be passed either as floats or as ``fractions.Fraction``.  Fractions
are carried exactly wherever it matters (for instance when ``r . theta`` is
exactly an integer and the comparison against ``A/N`` must not be fooled by
rounding).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError

DEFAULT_BALL_BUDGET = 10**7
DEFAULT_ELEMENT_BUDGET = 10**7

_TWO64 = 2.0**64


def _is_exact(v) -> bool:
    return isinstance(v, Rational)


def _reduce_mod1(v):
    if _is_exact(v):
        return Fraction(v) % 1
    r = float(v) % 1.0
    return 0.0 if r >= 1.0 else r


@dataclass(frozen=True)
class TorusVector:
    """A point of the torus (R/Z)^d.

    Coordinates are reduced to [0, 1) on construction.  When every coordinate
    is an ``int`` or ``Fraction`` the vector is *exact* and all derived
    quantities are computed in rational arithmetic.
    """

    coords: tuple

    def __init__(self, coords: Iterable = ()):
        object.__setattr__(self, "coords", tuple(_reduce_mod1(c) for c in coords))

    @classmethod
    def of(cls, *coords) -> "TorusVector":
        return cls(coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords], dtype=np.float64)

    def __add__(self, other) -> "TorusVector":
        other = other.coords if isinstance(other, TorusVector) else tuple(other)
        if len(other) != self.dim:
            raise PreconditionError("dimension mismatch")
        return TorusVector(a + b for a, b in zip(self.coords, other))

    def __sub__(self, other) -> "TorusVector":
        other = other.coords if isinstance(other, TorusVector) else tuple(other)
        return self + tuple(-b for b in other)

    def dot(self, r: Sequence[int]):
        """Return r . theta reduced mod 1 (exact for exact vectors)."""
        if len(r) != self.dim:
            raise PreconditionError("dimension mismatch")
        return _reduce_mod1(sum(int(ri) * c for ri, c in zip(r, self.coords)))


def _dist_to_int(v):
    v = _reduce_mod1(v)
    return min(v, 1 - v)


def torus_norm(x) -> float:
    """Max over coordinates of the distance to the nearest integer."""
    coords = x.coords if isinstance(x, TorusVector) else tuple(np.ravel(x))
    if not coords:
        return 0.0
    return float(max(_dist_to_int(c) for c in coords))


def torus_dist(values: np.ndarray) -> np.ndarray:
    """Vectorised distance to the nearest integer (elementwise)."""
    v = np.asarray(values, dtype=np.float64) % 1.0
    return np.minimum(v, 1.0 - v)


# --------------------------------------------------------------------------
# fractional parts of alpha * n**k

def monomial_phase(alpha, n, k: int = 1) -> np.ndarray:
    """Fractional part of ``alpha * n**k`` for an integer array ``n``.

    Rational ``alpha`` with denominator below 2**31 is handled exactly in
    modular integer arithmetic.  A float ``alpha`` is split into its part on
    the 2**-64 grid, which is applied exactly modulo 2**64, plus a tail below
    2**-64 that is applied in floating point.  The result is therefore exact
    up to the final rounding whenever the tail vanishes (every double in
    [2**-11, 1) has no such tail) or ``|n|**k < 2**64``.
    """
    n = np.asarray(n, dtype=np.int64)
    if k < 0:
        raise PreconditionError("degree must be nonnegative")
    if _is_exact(alpha):
        a = Fraction(alpha) % 1
        p, d = a.numerator, a.denominator
        if p == 0:
            return np.zeros(n.shape)
        if d < 2**31:
            base = n % d
            acc = np.full(n.shape, p, dtype=np.int64)
            for _ in range(k):
                acc = (acc * base) % d
            return acc / d
        out = [Fraction(p * pow(int(m), k, d) % d, d) for m in n.ravel()]
        return np.array([float(v) for v in out]).reshape(n.shape)
    a = float(alpha)
    if a < 0:
        ph = (-monomial_phase(-a, n, k)) % 1.0
        ph[ph >= 1.0] = 0.0
        return ph
    a = a % 1.0
    hi = math.floor(a * _TWO64)
    lo = a - hi / _TWO64
    with np.errstate(over="ignore"):
        nu = n.view(np.uint64) if n.dtype == np.int64 else n.astype(np.uint64)
        pw = np.ones(n.shape, dtype=np.uint64)
        for _ in range(k):
            pw = pw * nu
        x = pw * np.uint64(hi)
    ph = x.astype(np.float64) / _TWO64
    if lo:
        ph = ph + (lo * n.astype(np.longdouble) ** k) % 1
    ph = np.asarray(ph % 1.0, dtype=np.float64)
    ph[ph >= 1.0] = 0.0
    return ph


def torus_phase(theta: TorusVector, n, k: int = 1) -> np.ndarray:
    """Array of shape (len(n), d) holding theta * n**k reduced mod 1."""
    n = np.asarray(n, dtype=np.int64)
    if theta.dim == 0:
        return np.zeros((n.size, 0))
    return np.stack([monomial_phase(c, n, k) for c in theta.coords], axis=-1)


def torus_offset_norm(theta: TorusVector, z: TorusVector, n, k: int = 1) -> np.ndarray:
    """Vectorised ``|| theta n**k - z ||_{T^d}`` for an integer array n."""
    n = np.asarray(n, dtype=np.int64)
    if theta.dim != z.dim:
        raise PreconditionError("theta and z must have the same dimension")
    if theta.dim == 0:
        return np.zeros(n.shape)
    ph = torus_phase(theta, n, k) - z.as_array()
    return torus_dist(ph).max(axis=-1)


# --------------------------------------------------------------------------
# square roots modulo q

def sqrt_counts(q: int) -> np.ndarray:
    """Array whose b-th entry is #{x in Z/qZ : x^2 = b mod q}."""
    if q < 1:
        raise PreconditionError("modulus must be positive")
    x = np.arange(q, dtype=np.int64)
    return np.bincount((x * x) % q, minlength=q)


def sqrt_count(b: int, q: int) -> int:
    """Number of solutions of x^2 = b (mod q) with x in Z/qZ."""
    if q < 1 or not 0 <= b < q:
        raise PreconditionError("need q >= 1 and 0 <= b < q")
    return sum(1 for x in range(q) if (x * x - b) % q == 0)


def qr_set(q: int) -> frozenset:
    """All values x^2 mod q, including 0 and non-unit squares."""
    if q < 1:
        raise PreconditionError("modulus must be positive")
    return frozenset(int(v) for v in np.flatnonzero(sqrt_counts(q)))


def is_qr(b: int, q: int) -> bool:
    return sqrt_count(b % q, q) > 0


# --------------------------------------------------------------------------
# (A, N)-irrationality

def l1_ball_size(d: int, radius: int) -> int:
    """Number of integer points r in Z^d with ||r||_1 <= radius."""
    if radius < 0:
        return 0
    return sum(2**j * math.comb(d, j) * math.comb(radius, j) for j in range(d + 1))


def l1_ball_half(d: int, radius: int) -> np.ndarray:
    """Nonzero integer vectors with ||r||_1 <= radius, one from each pair +-r.

    The representative kept is the one whose first nonzero coordinate is
    positive.  Rows come out in lexicographic order.
    """
    pts = np.zeros((1, 0), dtype=np.int64)
    rem = np.array([radius], dtype=np.int64)
    for _ in range(d):
        vals = np.arange(-radius, radius + 1, dtype=np.int64)
        keep = np.abs(vals)[None, :] <= rem[:, None]
        rows, cols = np.nonzero(keep)
        pts = np.concatenate([pts[rows], vals[cols, None]], axis=1)
        rem = rem[rows] - np.abs(vals[cols])
    if pts.size == 0:
        return pts.reshape(0, d)
    nz = pts != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = pts[np.arange(len(pts)), first]
    return pts[has & (lead > 0)]


@dataclass(frozen=True)
class IrrationalityCertificate:
    """Outcome of an exhaustive (A, N)-irrationality test.

    ``min_distance`` is the smallest ||r . theta|| over the tested ball and
    ``witness`` the first vector attaining it.
    """

    theta: TorusVector
    A: float
    N: int
    irrational: bool
    min_distance: float
    witness: tuple | None

    def __bool__(self) -> bool:
        return self.irrational


def certify_irrational(theta: TorusVector, A, N: int,
                       budget: int = DEFAULT_BALL_BUDGET) -> IrrationalityCertificate:
    """Test every nonzero r with ||r||_1 <= A for ||r . theta|| >= A/N."""
    if not isinstance(theta, TorusVector):
        theta = TorusVector(theta)
    if A <= 0 or N < 1:
        raise PreconditionError("need A > 0 and N >= 1")
    d = theta.dim
    if d == 0:
        return IrrationalityCertificate(theta, A, N, True, 0.5, None)
    radius = math.floor(A)
    if l1_ball_size(d, radius) > budget:
        raise BudgetExceeded(f"l1 ball of radius {radius} in dimension {d} exceeds budget {budget}")
    rs = l1_ball_half(d, radius)
    if len(rs) == 0:
        return IrrationalityCertificate(theta, A, N, True, 0.5, None)
    if theta.exact:
        den = math.lcm(*(c.denominator for c in theta.coords))
        nums = np.array([c.numerator * (den // c.denominator) for c in theta.coords], dtype=object)
        dots = (rs.astype(object) @ nums) % den
        m = np.minimum(dots, den - dots)
        i = int(np.argmin(m))
        irr = int(m[i]) * N >= Fraction(A) * den
        return IrrationalityCertificate(theta, A, N, irr, float(Fraction(int(m[i]), den)), tuple(int(v) for v in rs[i]))
    dist = torus_dist(rs.astype(np.float64) @ theta.as_array())
    i = int(np.argmin(dist))
    return IrrationalityCertificate(theta, A, N, bool(dist[i] >= A / N), float(dist[i]),
                                    tuple(int(v) for v in rs[i]))


def is_irrational(theta: TorusVector, A, N: int, budget: int = DEFAULT_BALL_BUDGET) -> bool:
    """True iff theta is (A, N)-irrational."""
    return certify_irrational(theta, A, N, budget).irrational


def max_irrationality(theta: TorusVector, N: int, A_max: int = 10**4,
                      budget: int = DEFAULT_BALL_BUDGET) -> int:
    """Largest integer A <= A_max for which theta is (A, N)-irrational (0 if none)."""
    best = 0
    for A in range(1, A_max + 1):
        if l1_ball_size(theta.dim, A) > budget:
            break
        if not is_irrational(theta, A, N, budget):
            break
        best = A
    return best


# --------------------------------------------------------------------------
# rational approximation

@dataclass(frozen=True)
class RationalApprox:
    """Best q <= q_max for ||q alpha||; ``p/q`` is the nearest fraction."""

    q: int
    p: int
    distance: float

    @property
    def convergent(self) -> tuple[int, int]:
        return (self.p, self.q)


def continued_fraction(x: Fraction, max_terms: int = 10_000) -> list[int]:
    """Partial quotients of the (exact) rational x."""
    x = Fraction(x)
    terms = []
    while len(terms) < max_terms:
        a = math.floor(x)
        terms.append(a)
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return terms


def _approx_denominators(alpha: Fraction, q_max: int) -> list[int]:
    """Denominators of convergents and intermediate fractions up to q_max."""
    terms = continued_fraction(alpha)
    qs = {1}
    q_prev, q_cur = 0, 1
    for a in terms[1:]:
        for t in range(1, a + 1):
            qt = t * q_cur + q_prev
            if qt > q_max:
                break
            qs.add(qt)
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if q_cur > q_max:
            break
    return sorted(qs)


def best_rational_approx(alpha, q_max: int) -> RationalApprox:
    """Return q <= q_max minimising ||q alpha||, smallest q on ties.

    Candidates are the continued-fraction convergents together with every
    intermediate fraction; distances are compared exactly.
    """
    if q_max < 1:
        raise PreconditionError("q_max must be >= 1")
    a = Fraction(alpha)
    best = None
    for q in _approx_denominators(a % 1, q_max):
        dist = _dist_to_int(q * a)
        if best is None or dist < best[1]:
            best = (q, dist)
    q, dist = best
    return RationalApprox(q=q, p=round(q * a), distance=float(dist))


# --------------------------------------------------------------------------
# progressions

def _as_fraction(v) -> Fraction:
    return Fraction(v) if not isinstance(v, Fraction) else v


@dataclass(frozen=True)
class Progression:
    """The set {n in Z : lo <= n/scale <= hi, modulus | n}.

    ``scale`` is usually a positive integer N; a positive real is accepted so
    that progressions at scale N^(1/4) can be written down directly.
    """

    lo: Fraction
    hi: Fraction
    scale: Fraction
    modulus: int = 1

    def __init__(self, lo, hi, scale, modulus: int = 1):
        lo, hi, scale = _as_fraction(lo), _as_fraction(hi), _as_fraction(scale)
        if not lo < hi:
            raise PreconditionError("progression needs lo < hi")
        if scale <= 0 or modulus < 1:
            raise PreconditionError("scale and modulus must be positive")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "modulus", int(modulus))

    @property
    def first(self) -> int:
        q = self.modulus
        return q * math.ceil(math.ceil(self.lo * self.scale) / q)

    @property
    def last(self) -> int:
        q = self.modulus
        return q * math.floor(math.floor(self.hi * self.scale) / q)

    def __len__(self) -> int:
        return max(0, (self.last - self.first) // self.modulus + 1)

    def __contains__(self, n) -> bool:
        n = int(n)
        return n % self.modulus == 0 and self.lo <= Fraction(n) / self.scale <= self.hi

    def contains_array(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=np.int64)
        return (n % self.modulus == 0) & (n >= self.first) & (n <= self.last)

    def elements(self, budget: int = DEFAULT_ELEMENT_BUDGET) -> np.ndarray:
        size = len(self)
        if size > budget:
            raise BudgetExceeded(f"progression has {size} elements, budget {budget}")
        if size == 0:
            return np.zeros(0, dtype=np.int64)
        return np.arange(self.first, self.last + 1, self.modulus, dtype=np.int64)

    @property
    def bounds(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)


def progression_elements(P: Progression, budget: int = DEFAULT_ELEMENT_BUDGET) -> list[int]:
    """Increasing list of the elements of P."""
    return [int(v) for v in P.elements(budget)]
