"""Weyl sums, three-fold representation counts and the sixth moment of 1_S.

For a finite S of nonnegative integers, r_3(x) counts ordered triples in S
summing to x, and by Parseval

    int_0^1 |sum_{s in S} e(s t)|^6 dt = sum_x r_3(x)^2.

For S the squares up to N this is O(N^2); :func:`sixth_moment` computes it
exactly by FFT convolution with a rounding check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .numtheory import (RationalApprox, TorusVector, best_rational_approx,
                        monomial_phase)

MAX_DEGREE = 8
MAX_INTERVAL = 10**8
MAX_SET_ELEMENT = 10**7
_CHUNK = 1 << 20
# exact-integer range of float64, with room for FFT error
_FFT_EXACT = 2**50


@dataclass(frozen=True)
class PolynomialPhase:
    """g(n) = a_k n^k + ... + a_0, coefficients leading first.

    Coefficients may be floats or Fractions; Fractions are evaluated exactly
    mod 1.
    """

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.coeffs)
        if not cs:
            cs = (0,)
        if len(cs) - 1 > MAX_DEGREE:
            raise PreconditionError(f"degree must be <= {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def monomial(cls, alpha, k: int) -> "PolynomialPhase":
        return cls((alpha,) + (0,) * k)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[0]

    def phase(self, n) -> np.ndarray:
        """g(n) mod 1 for an integer array n."""
        n = np.asarray(n, dtype=np.int64)
        out = np.zeros(n.shape)
        for j, c in enumerate(reversed(self.coeffs)):
            if c:
                out += monomial_phase(c, n, j)
        return out % 1.0


def _interval(I) -> tuple[int, int]:
    if isinstance(I, range):
        if I.step != 1:
            raise PreconditionError("interval must have step 1")
        return I.start, I.stop - 1
    lo, hi = I
    return int(lo), int(hi)


def weyl_sum(g: PolynomialPhase, I) -> complex:
    """sum_{n in I} e(g(n)) for I = (lo, hi) inclusive or a step-1 range."""
    lo, hi = _interval(I)
    if hi - lo + 1 > MAX_INTERVAL:
        raise PreconditionError(f"interval longer than {MAX_INTERVAL}")
    re, im = [], []
    for start in range(lo, hi + 1, _CHUNK):
        n = np.arange(start, min(start + _CHUNK, hi + 1), dtype=np.int64)
        w = 2 * np.pi * g.phase(n)
        re.append(float(np.cos(w).sum()))
        im.append(float(np.sin(w).sum()))
    return complex(math.fsum(re), math.fsum(im))


@dataclass(frozen=True)
class WeylReport:
    length: int
    delta: float
    approx: RationalApprox

    @property
    def q(self) -> int:
        return self.approx.q

    @property
    def distance(self) -> float:
        return float(self.approx.distance)


def weyl_check(theta: TorusVector, r, k: int, I, lower_terms: PolynomialPhase | None = None,
               q_max: int | None = None) -> WeylReport:
    """Normalised sum of e(r.theta n^k + lower terms) and a rational fit.

    Reports delta = |sum| / |I| together with the best approximation a/q of
    the leading coefficient r.theta with q <= q_max (default |I|), so that a
    large delta can be compared with a small ||q r.theta||.
    """
    r = [int(v) for v in r]
    if len(r) != theta.dim:
        raise PreconditionError("r and theta must have the same dimension")
    if not any(r):
        raise PreconditionError("r must be nonzero")
    lead = theta.dot(r)
    lower = tuple(lower_terms.coeffs) if lower_terms is not None else ()
    if len(lower) > k:
        raise PreconditionError("lower terms must have degree < k")
    coeffs = (lead,) + (0,) * (k - len(lower)) + lower
    lo, hi = _interval(I)
    length = hi - lo + 1
    s = weyl_sum(PolynomialPhase(coeffs), (lo, hi))
    approx = best_rational_approx(lead, q_max if q_max is not None else max(1, length))
    return WeylReport(length, abs(s) / length, approx)


# --------------------------------------------------------------------------
# representation counts

@dataclass(frozen=True, eq=False)
class RepProfile:
    """counts[x] = number of ordered (n1, n2, n3) in S^3 with n1 + n2 + n3 = x."""

    counts: np.ndarray
    size: int
    descriptor: str = ""

    def __getitem__(self, x: int) -> int:
        return int(self.counts[x]) if 0 <= x < len(self.counts) else 0

    @property
    def mass(self) -> int:
        return int(self.counts.sum(dtype=object))


def _as_set(S) -> np.ndarray:
    arr = np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))
    if arr.size == 0:
        raise PreconditionError("S must be nonempty")
    if arr[0] < 0:
        raise PreconditionError("S must consist of nonnegative integers")
    if arr[-1] > MAX_SET_ELEMENT:
        raise PreconditionError(f"max(S) must be <= {MAX_SET_ELEMENT}")
    return arr


def _rep3_fft(arr: np.ndarray) -> np.ndarray | None:
    """Exact r_3 by FFT, or None if rounding residuals are not safely small."""
    m = int(arr[-1])
    L = 1 << (3 * m + 1).bit_length()
    ind = np.zeros(L)
    ind[arr] = 1.0
    f = np.fft.rfft(ind)
    raw = np.fft.irfft(f * f * f, L)[: 3 * m + 1]
    out = np.rint(raw)
    if np.max(np.abs(raw - out)) >= 0.25:
        return None
    return out.astype(np.int64)


def _rep3_direct(arr: np.ndarray, budget: int) -> np.ndarray:
    """r_3 by explicit pair sums followed by shifted accumulation."""
    n, m = arr.size, int(arr[-1])
    if n * n + n * (2 * m + 1) > budget:
        raise BudgetExceeded("direct representation count exceeds budget")
    r2 = np.zeros(2 * m + 1, dtype=np.int64)
    for s in arr:
        np.add.at(r2, arr + s, 1)
    r3 = np.zeros(3 * m + 1, dtype=np.int64)
    for s in arr:
        r3[s: s + 2 * m + 1] += r2
    return r3


def rep_counts_3(S, method: str = "auto", budget: int = 10**10) -> RepProfile:
    """Exact r_3 for S via FFT, falling back to direct counting.

    ``method`` is "auto", "fft" or "direct".  The FFT result is accepted only
    when every rounding residual is below 0.25 and the counts are within the
    exact range of float64.
    """
    arr = _as_set(S)
    n = arr.size
    counts = None
    if method not in ("auto", "fft", "direct"):
        raise PreconditionError(f"unknown method {method!r}")
    if method != "direct" and n * n < _FFT_EXACT:
        counts = _rep3_fft(arr)
        if counts is None and method == "fft":
            raise PreconditionError("FFT rounding residual too large")
    if counts is None:
        counts = _rep3_direct(arr, budget)
    desc = f"|S|={n}, max={int(arr[-1])}"
    return RepProfile(counts, n, desc)


def sixth_moment(S, method: str = "auto") -> int:
    """sum_x r_3(x)^2, computed exactly."""
    prof = S if isinstance(S, RepProfile) else rep_counts_3(S, method)
    c = prof.counts
    if prof.size ** 6 < 2**62:
        return int(np.dot(c, c))
    return sum(v * v for v in c.tolist())


def squares_upto(N: int) -> np.ndarray:
    return np.arange(1, math.isqrt(N) + 1, dtype=np.int64) ** 2


def lp_moment(S, p: float, grid: int | None = None) -> float:
    """int_0^1 |1^_S(t)|^p dt by the trapezoidal rule on a uniform grid.

    For even integer p and a grid longer than p/2 * max(S) the rule is exact.
    """
    arr = _as_set(S)
    m = int(arr[-1])
    if grid is None:
        grid = 1 << (4 * m + 1).bit_length()
    ind = np.zeros(grid)
    np.add.at(ind, arr % grid, 1.0)
    return float(np.mean(np.abs(np.fft.fft(ind)) ** p))


def moment_report(S, p_values=(6,)) -> dict:
    """JSON-ready summary: N = max(S), the sixth moment and its ratio to N^2.

    Extra p (e.g. 5) add an empirical restriction-type ratio against
    N^(p/2 - 1).
    """
    arr = _as_set(S)
    N = int(arr[-1])
    m6 = sixth_moment(arr)
    out = {"N": N, "size": int(arr.size), "sixth_moment": m6, "ratio_to_N2": m6 / N**2}
    for p in p_values:
        if p == 6:
            continue
        val = lp_moment(arr, p)
        out[f"moment_{p}"] = val
        out[f"ratio_{p}"] = val / N ** (p / 2 - 1)
    return out


def rational(x) -> Fraction:
    """Parse '3/7', '0.25' or an int into a Fraction."""
    return Fraction(str(x))
