"""Bohr-type sets, their integer square roots and representation counts.

A :class:`BohrSpec` describes

    Y = {n : n = b mod q, |n/N - x| <= eps, ||theta n - z||_{T^d} <= eps}.

Its square root sqrt(Y) = {n : n^2 in Y} splits over the square roots a of b
mod q into the sets Z^a_+ and Z^a_- (n = +a or -a mod q), and the sums
z_+ + z_- are compared against the squares of a short progression Q at scale
N^(1/4).

Reals in a spec are converted with ``Fraction(str(v))`` so that decimal input
such as ``eps = 0.1`` gives exact interval endpoints.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .numtheory import (DEFAULT_ELEMENT_BUDGET, Progression, TorusVector, monomial_phase,
                        torus_dist, torus_offset_norm)

DEFAULT_C = Fraction(1, 8)


def _dec(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return Fraction(str(v))


@dataclass(frozen=True)
class BohrSpec:
    N: int
    q: int
    b: int
    x: Fraction
    eps: Fraction
    theta: TorusVector = field(default_factory=TorusVector)
    z: TorusVector = field(default_factory=TorusVector)

    def __post_init__(self):
        if self.N < 1 or self.q < 1:
            raise PreconditionError("need N, q >= 1")
        x, eps = _dec(self.x), _dec(self.eps)
        if eps <= 0:
            raise PreconditionError("eps must be positive")
        theta = self.theta if isinstance(self.theta, TorusVector) else TorusVector(self.theta)
        z = self.z if isinstance(self.z, TorusVector) else TorusVector(self.z)
        if theta.dim != z.dim:
            raise PreconditionError("theta and z must have the same dimension")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "b", int(self.b) % self.q)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "z", z)

    @property
    def d(self) -> int:
        return self.theta.dim

    @property
    def torus_active(self) -> bool:
        # every point of T^d lies within 1/2 of z
        return self.d > 0 and self.eps < Fraction(1, 2)

    def interval(self) -> tuple[int, int]:
        """Integers n with |n/N - x| <= eps."""
        lo = (self.x - self.eps) * self.N
        hi = (self.x + self.eps) * self.N
        return math.ceil(lo), math.floor(hi)

    def torus_ok(self, values) -> np.ndarray:
        """||values - z|| <= eps for an array of torus points (shape (n, d))."""
        values = np.asarray(values, dtype=np.float64)
        if not self.torus_active:
            return np.ones(values.shape[0], dtype=bool)
        return torus_dist(values - self.z.as_array()).max(axis=-1) <= float(self.eps)

    def expected_size(self) -> float:
        return float((2 * self.eps) ** (self.d + 1)) * self.N / self.q

    def to_dict(self) -> dict:
        out = {"N": self.N, "q": self.q, "b": self.b, "x": str(self.x), "eps": str(self.eps), "d": self.d}
        for i, c in enumerate(self.theta.coords):
            out[f"theta_{i + 1}"] = str(c)
        for i, c in enumerate(self.z.coords):
            out[f"z_{i + 1}"] = str(c)
        return out


def _number(text: str):
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_spec(text: str) -> BohrSpec:
    """Read ``key = value`` lines: N, q, b (or u), x, eps, d, theta_i, z_i.

    Blank lines and ``#`` comments are ignored.  Values may be integers,
    decimals or fractions ``p/q``.
    """
    kv: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PreconditionError(f"expected key = value, got {raw!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        kv[k] = v
    try:
        d = int(kv.get("d", "0"))
        theta = [_number(kv[f"theta_{i}"]) for i in range(1, d + 1)]
        z = [_number(kv.get(f"z_{i}", "0")) for i in range(1, d + 1)]
        b = kv.get("b", kv.get("u", "0"))
        return BohrSpec(int(kv["N"]), int(kv.get("q", "1")), int(b), _dec(_number(kv["x"])),
                        _dec(_number(kv["eps"])), TorusVector(theta), TorusVector(z))
    except KeyError as exc:
        raise PreconditionError(f"missing key {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise PreconditionError(f"bad value: {exc}") from exc


def in_bohr(spec: BohrSpec, n) -> np.ndarray:
    """The membership predicate applied directly to each n."""
    n = np.asarray(n, dtype=np.int64)
    lo, hi = spec.interval()
    ok = ((n - spec.b) % spec.q == 0) & (n >= lo) & (n <= hi)
    if spec.torus_active:
        ok &= torus_offset_norm(spec.theta, spec.z, n) <= float(spec.eps)
    return ok


def bohr_elements(spec: BohrSpec, budget: int = DEFAULT_ELEMENT_BUDGET) -> np.ndarray:
    """Sorted elements of Y by scanning the residue class b mod q."""
    if spec.expected_size() > budget:
        raise BudgetExceeded("expected size exceeds budget")
    lo, hi = spec.interval()
    lo = max(lo, 1)
    first = lo + (spec.b - lo) % spec.q
    if first > hi:
        return np.zeros(0, dtype=np.int64)
    if (hi - first) // spec.q + 1 > budget:
        raise BudgetExceeded("residue class scan exceeds budget")
    n = np.arange(first, hi + 1, spec.q, dtype=np.int64)
    if spec.torus_active:
        n = n[torus_offset_norm(spec.theta, spec.z, n) <= float(spec.eps)]
    return n


# --------------------------------------------------------------------------
# square roots

def _isqrt_array(v: np.ndarray) -> np.ndarray:
    r = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    r -= (r * r > v)
    r += ((r + 1) * (r + 1) <= v)
    return r


@dataclass(frozen=True, eq=False)
class SqrtSet:
    """{n >= 1 : n^2 in base}; integer roots only."""

    base: np.ndarray
    elements: np.ndarray

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, n) -> bool:
        i = np.searchsorted(self.elements, n)
        return bool(i < len(self.elements) and self.elements[i] == n)


def sqrt_set(base) -> SqrtSet:
    arr = np.unique(np.asarray(list(base) if not isinstance(base, np.ndarray) else base, dtype=np.int64))
    pos = arr[arr >= 1]
    r = _isqrt_array(pos)
    return SqrtSet(arr, np.unique(r[r * r == pos]))


def square_roots_mod(b: int, q: int) -> list[int]:
    """The set of a in Z/qZ with a^2 = b."""
    b %= q
    return [a for a in range(q) if a * a % q == b]


def root_range(spec: BohrSpec) -> tuple[int, int]:
    """Integers n >= 1 with (x - eps) N <= n^2 <= (x + eps) N."""
    lo_sq, hi_sq = spec.interval()
    lo = max(1, math.isqrt(max(lo_sq - 1, 0)) + 1) if lo_sq > 0 else 1
    hi = math.isqrt(hi_sq) if hi_sq >= 0 else 0
    return lo, hi


def z_sets(spec: BohrSpec, a: int) -> tuple[np.ndarray, np.ndarray]:
    """(Z^a_+, Z^a_-): n = +a or -a mod q in the root range with ||theta n^2 - z|| <= eps."""
    q = spec.q
    if (a * a - spec.b) % q:
        raise PreconditionError(f"{a} is not a square root of {spec.b} mod {q}")
    lo, hi = root_range(spec)
    n = np.arange(lo, hi + 1, dtype=np.int64)
    if spec.torus_active:
        ph = np.stack([monomial_phase(c, n, 2) for c in spec.theta.coords], axis=-1)
        n = n[spec.torus_ok(ph)]
    return n[(n - a) % q == 0], n[(n + a) % q == 0]


def sqrt_decomposition(spec: BohrSpec) -> np.ndarray:
    """Union over roots a of Z^a_+ and Z^a_-, which equals sqrt(Y)."""
    parts = [np.zeros(0, dtype=np.int64)]
    for a in square_roots_mod(spec.b, spec.q):
        parts.extend(z_sets(spec, a))
    return np.unique(np.concatenate(parts))


def _fourth_root_scale(N: int):
    r = round(N ** 0.25)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** 4 == N:
            return c
    return N ** 0.25


def q_centre(x, corrected: bool = False) -> float:
    """(2x)^(1/4) by default, or (4x)^(1/4) with ``corrected``.

    Sums z_+ + z_- are close to 2 sqrt(x N), whose square root is
    (4x)^(1/4) N^(1/4).
    """
    return float((4 if corrected else 2) * _dec(x)) ** 0.25


def q_progression(spec: BohrSpec, corrected: bool = False) -> Progression:
    """P([c - eps/100, c + eps/100]; N^(1/4), q) with c from :func:`q_centre`."""
    if spec.x <= 0:
        raise PreconditionError("x must be positive")
    c = _dec(repr(q_centre(spec.x, corrected)))
    w = spec.eps / 100
    return Progression(c - w, c + w, _fourth_root_scale(spec.N), spec.q)


# --------------------------------------------------------------------------
# representation counts

def _as_sorted(S) -> np.ndarray:
    return np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))


def rep_count(Zp, Zm, m: int) -> int:
    """#{(z_+, z_-) in Zp x Zm : z_+ + z_- = m}."""
    Zp, Zm = _as_sorted(Zp), _as_sorted(Zm)
    if Zp.size == 0 or Zm.size == 0:
        return 0
    need = m - Zp
    i = np.searchsorted(Zm, need)
    i = np.minimum(i, Zm.size - 1)
    return int(np.count_nonzero(Zm[i] == need))


def rep_counts(Zp, Zm, ms) -> np.ndarray:
    """rep_count for each m; by convolution when the sets are dense."""
    Zp, Zm = _as_sorted(Zp), _as_sorted(Zm)
    ms = np.asarray(ms, dtype=np.int64)
    if Zp.size == 0 or Zm.size == 0:
        return np.zeros(ms.shape, dtype=np.int64)
    span = int(max(Zp[-1], Zm[-1]) - min(Zp[0], Zm[0]))
    if Zp.size * ms.size > 4 * span and span < 10**7:
        off = int(min(Zp[0], Zm[0]))
        a = np.zeros(span + 1)
        b = np.zeros(span + 1)
        a[Zp - off] = 1
        b[Zm - off] = 1
        L = 1 << (2 * span + 1).bit_length()
        conv = np.rint(np.fft.irfft(np.fft.rfft(a, L) * np.fft.rfft(b, L), L)).astype(np.int64)
        idx = ms - 2 * off
        ok = (idx >= 0) & (idx <= 2 * span)
        out = np.zeros(ms.shape, dtype=np.int64)
        out[ok] = conv[idx[ok]]
        return out
    return np.array([rep_count(Zp, Zm, int(m)) for m in ms], dtype=np.int64)


def lemma52_count(n_plus: int, Zm, q: int) -> int:
    """#{n_- in Zm : n_- + n_plus = q^2 m^2 for some integer m}."""
    Zm = _as_sorted(Zm)
    if Zm.size == 0:
        return 0
    s = Zm + int(n_plus)
    q2 = q * q
    cand = s[(s >= 0) & (s % q2 == 0)] // q2
    r = _isqrt_array(cand)
    return int(np.count_nonzero(r * r == cand))


def sumset_contains(S, targets) -> np.ndarray:
    """Whether each target is s + s' with s, s' in S."""
    S = _as_sorted(S)
    targets = np.asarray(targets, dtype=np.int64)
    if S.size == 0:
        return np.zeros(targets.shape, dtype=bool)
    return rep_counts(S, S, targets) > 0


# --------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class CoverageReport:
    q_size: int
    hits: int
    fraction: float
    deficiency: int
    scale: float
    corrected_centre: bool

    def to_dict(self) -> dict:
        return asdict(self)


def prop51_check(spec: BohrSpec, Yprime=None, corrected: bool = True,
                 budget: int = DEFAULT_ELEMENT_BUDGET) -> CoverageReport:
    """Fraction of t in Q with t^2 in sqrt(Y') + sqrt(Y').

    ``Yprime`` defaults to Y itself, in which case sqrt(Y) is assembled from
    the Z sets without enumerating Y.  ``scale`` is eps N^(1/4) / q, the size
    the deficiency is compared with.
    """
    if Yprime is None:
        roots = sqrt_decomposition(spec)
    else:
        Yp = _as_sorted(Yprime)
        if Yp.size and not np.all(in_bohr(spec, Yp)):
            raise PreconditionError("Y' must be a subset of Y")
        roots = sqrt_set(Yp).elements
    t = q_progression(spec, corrected).elements(budget)
    hits = int(np.count_nonzero(sumset_contains(roots, t * t))) if t.size else 0
    size = int(t.size)
    scale = float(spec.eps) * spec.N ** 0.25 / spec.q
    return CoverageReport(size, hits, hits / size if size else 0.0, size - hits, scale, corrected)


@dataclass(frozen=True)
class RepresentationReport:
    a: int
    q_size: int
    threshold: float
    c: float
    well_represented: int
    fraction: float
    min_count: int
    median_count: float
    corrected_centre: bool

    def to_dict(self) -> dict:
        return asdict(self)


def representation_report(spec: BohrSpec, a: int | None = None, c=DEFAULT_C, corrected: bool = True,
                   budget: int = DEFAULT_ELEMENT_BUDGET) -> RepresentationReport:
    """How many t in Q have r(t^2) >= c (2 eps)^(2d+1) N^(1/2) / q.

    r counts z_+ + z_- with z_+ in Z^a_+, z_- in Z^a_-; ``a`` defaults to the
    least square root of b.  The constant c is a calibration parameter.
    """
    roots = square_roots_mod(spec.b, spec.q)
    if not roots:
        raise PreconditionError(f"{spec.b} is not a square mod {spec.q}")
    a = roots[0] if a is None else a
    Zp, Zm = z_sets(spec, a)
    t = q_progression(spec, corrected).elements(budget)
    counts = rep_counts(Zp, Zm, t * t)
    thr = float(c) * float((2 * spec.eps) ** (2 * spec.d + 1)) * math.sqrt(spec.N) / spec.q
    good = int(np.count_nonzero(counts >= thr))
    n = int(t.size)
    return RepresentationReport(a, n, thr, float(c), good, good / n if n else 0.0,
                         int(counts.min()) if n else 0, float(np.median(counts)) if n else 0.0, corrected)


@dataclass(frozen=True)
class ZSizeReport:
    a: int
    plus: int
    minus: int
    heuristic: float
    interval_prediction: float
    ratio_plus: float
    ratio_minus: float
    within_factor_2: bool

    def to_dict(self) -> dict:
        return asdict(self)


def z_size_report(spec: BohrSpec, a: int | None = None) -> ZSizeReport:
    """|Z^a_+|, |Z^a_-| against (2 eps)^(d+1) N^(1/2) / q.

    ``interval_prediction`` is the finer estimate (root-range length / q)
    times (2 eps)^d, which the heuristic approximates only for x near 1/4.
    """
    roots = square_roots_mod(spec.b, spec.q)
    if not roots:
        raise PreconditionError(f"{spec.b} is not a square mod {spec.q}")
    a = roots[0] if a is None else a
    Zp, Zm = z_sets(spec, a)
    heur = float((2 * spec.eps) ** (spec.d + 1)) * math.sqrt(spec.N) / spec.q
    lo, hi = root_range(spec)
    dens = float((2 * spec.eps) ** spec.d) if spec.torus_active else 1.0
    pred = max(hi - lo + 1, 0) / spec.q * dens
    rp, rm = Zp.size / heur, Zm.size / heur
    return ZSizeReport(a, int(Zp.size), int(Zm.size), heur, pred, rp, rm,
                       bool(0.5 <= rp <= 2 and 0.5 <= rm <= 2))


def random_spec(rng: np.random.Generator, N: int, q: int = 1, d: int = 1, eps=Fraction(1, 10),
                x=None) -> BohrSpec:
    """A spec with random theta, z in T^d and a square residue b."""
    b = int(rng.integers(q)) ** 2 % q
    x = _dec(x) if x is not None else Fraction(int(rng.integers(20, 40)), 10)
    theta = TorusVector(rng.random(d).tolist())
    z = TorusVector(rng.random(d).tolist())
    return BohrSpec(N, q, b, x, _dec(eps), theta, z)
