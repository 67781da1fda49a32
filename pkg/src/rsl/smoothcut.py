"""Smooth cutoff functions and their Fourier coefficients.

Everything is built from the bump f(x) = C exp(1/(x^2 - 1)) on (-1, 1),
normalised to unit mass.  Convolving an indicator with a rescaled bump
gives a C-infinity cutoff whose values are differences of the bump CDF F:

    (1_[-R, R] * f_e)(x) = F((x + R)/e) - F((x - R)/e),    f_e = f(./e)/e.

On the torus the balls are l-infinity balls, so every torus cutoff here is a
product of one-dimensional ones and its Fourier coefficients factor as

    psi^(r) = prod_i sin(2 pi r_i R) / (pi r_i) * f^(e r_i).
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline

from .errors import BudgetExceeded, ConstructionError, PreconditionError
from .numtheory import IrrationalityCertificate, TorusVector, torus_offset_norm, torus_phase

_GL_NODES = 4096
_CDF_PANELS = 4000
COEFFICIENT_FLOOR = 1e-15


def _bump_core(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape)
    inside = np.abs(x) < 1
    xi = x[inside]
    out[inside] = np.exp(1.0 / (xi * xi - 1.0))
    return out


@lru_cache(maxsize=None)
def bump_mass() -> float:
    """Integral of exp(1/(x^2 - 1)) over (-1, 1)."""
    val, _ = quad(lambda t: math.exp(1.0 / (t * t - 1.0)), -1, 1, epsabs=0.0, epsrel=1e-12, limit=200)
    return val


@lru_cache(maxsize=None)
def bump_constant() -> float:
    """C with int C exp(1/(x^2-1)) dx = 1 (about 2.2523)."""
    return 1.0 / bump_mass()


def base_bump(x):
    """f(x) = C exp(1/(x^2 - 1)) for |x| < 1 and 0 otherwise."""
    out = bump_constant() * _bump_core(x)
    return float(out) if np.ndim(x) == 0 else out


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=None)
def _cdf_spline() -> CubicHermiteSpline:
    # panel integrals by 8-point Gauss-Legendre, then Hermite interpolation
    edges = np.linspace(-1.0, 1.0, _CDF_PANELS + 1)
    t, w = _gauss_legendre(8)
    half = (edges[1] - edges[0]) / 2
    mids = (edges[:-1] + edges[1:]) / 2
    pts = mids[:, None] + half * t[None, :]
    panel = (base_bump(pts) * w[None, :]).sum(axis=1) * half
    cum = np.concatenate([[0.0], np.cumsum(panel)])
    cum /= cum[-1]
    return CubicHermiteSpline(edges, cum, base_bump(edges))


def bump_cdf(x):
    """F(x) = int_{-1}^x f, exactly 0 for x <= -1 and 1 for x >= 1."""
    x = np.asarray(x, dtype=np.float64)
    out = np.where(x >= 1.0, 1.0, 0.0)
    inside = np.abs(x) < 1
    if inside.any():
        out[inside] = np.clip(_cdf_spline()(x[inside]), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def bump_hat(xi, nodes: int = _GL_NODES):
    """f^(xi) = int f(x) e(-x xi) dx, real since f is even."""
    xi = np.asarray(xi, dtype=np.float64)
    t, w = _gauss_legendre(nodes)
    fw = base_bump(t) * w
    flat = xi.ravel()
    out = np.empty(flat.shape)
    for s in range(0, flat.size, 2048):
        blk = flat[s: s + 2048]
        out[s: s + 2048] = np.cos(2 * np.pi * np.outer(blk, t)) @ fw
    out = out.reshape(xi.shape)
    return float(out) if out.ndim == 0 else out


def smoothed_indicator(x, radius: float, width: float):
    """(1_[-radius, radius] * f_width)(x) on the real line."""
    x = np.asarray(x, dtype=np.float64)
    return bump_cdf((x + radius) / width) - bump_cdf((x - radius) / width)


def smoothed_indicator_hat(r, radius: float, width: float):
    """Fourier transform of :func:`smoothed_indicator` at frequency r."""
    r = np.asarray(r, dtype=np.float64)
    box = np.where(r == 0, 2 * radius, np.sin(2 * np.pi * r * radius) / (np.pi * np.where(r == 0, 1, r)))
    return box * bump_hat(width * r)


# --------------------------------------------------------------------------
# cutoff containers

@dataclass(frozen=True)
class SampledCutoff:
    """A cutoff with its evaluator and declared support.

    ``domain`` is "real", "integers" or "torus".  Torus cutoffs built here
    are separable with the same one-dimensional factor in each coordinate,
    described by ``radius`` and ``width``.
    """

    domain: str
    func: Callable = field(repr=False)
    support: tuple
    resolution: int = 0
    name: str = ""
    dim: int = 1
    scale: int | None = None
    radius: float | None = None
    width: float | None = None

    def __call__(self, x):
        return self.func(x)

    @property
    def separable(self) -> bool:
        return self.domain == "torus" and self.radius is not None

    def coef1d(self, r):
        if not self.separable:
            raise PreconditionError("closed-form coefficients need a separable torus cutoff")
        return smoothed_indicator_hat(r, self.radius, self.width)

    def integral(self) -> float:
        """Integral over the torus, equal to psi^(0)."""
        if self.separable:
            return float((2 * self.radius) ** self.dim)
        grid = _torus_grid(self, 1 << 10)
        return float(grid.mean())


# --------------------------------------------------------------------------
# the interval majorant on the integers

def interval_majorant(N: int, kind: str = "smooth") -> SampledCutoff:
    """A nonnegative psi on Z with psi(n) = 1 for N <= n < 2N.

    ``smooth``: psi(n) = g(n/N) with g = 1_[0,3] * f, supported in (-N, 4N).
    ``trapezoid``: 0 at 0, rising linearly to 1 at N, 1 up to 2N, back to 0 at 3N.
    """
    if N < 16:
        raise PreconditionError("N must be >= 16")
    if kind == "smooth":
        def psi(n):
            t = np.asarray(n, dtype=np.float64) / N
            return bump_cdf(t) - bump_cdf(t - 3.0)
        return SampledCutoff("integers", psi, (-N, 4 * N), name="smooth", scale=N)
    if kind == "trapezoid":
        def psi(n):
            n = np.asarray(n, dtype=np.float64)
            return np.clip(np.minimum(n, 3 * N - n) / N, 0.0, 1.0)
        return SampledCutoff("integers", psi, (0, 3 * N), name="trapezoid", scale=N)
    raise PreconditionError(f"unknown kind {kind!r}")


def indicator_cutoff(lo: int, hi: int) -> SampledCutoff:
    """Sharp 1_[lo, hi) on Z, for contrast with the smooth majorants."""
    def psi(n):
        n = np.asarray(n)
        return ((n >= lo) & (n < hi)).astype(np.float64)
    return SampledCutoff("integers", psi, (lo, hi - 1), name="indicator")


def integer_fourier(psi: SampledCutoff, t) -> np.ndarray:
    """psi^(t) = sum_n psi(n) e(-t n) evaluated directly."""
    lo, hi = psi.support
    n = np.arange(int(lo), int(hi) + 1)
    v = psi(n)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return np.array([np.sum(v * np.exp(-2j * np.pi * ((tt * n) % 1.0))) for tt in t])


def l1_fourier_norm(psi: SampledCutoff, grid: int = 1 << 16) -> float:
    """int_T |psi^(t)| dt by the trapezoid rule on ``grid`` equispaced points.

    The samples psi^(j / grid) are computed exactly by folding n mod grid.
    """
    if psi.domain != "integers":
        raise PreconditionError("l1_fourier_norm expects a cutoff on the integers")
    if grid < 1 << 14:
        raise PreconditionError("grid must be >= 2^14")
    lo, hi = psi.support
    n = np.arange(int(lo), int(hi) + 1)
    folded = np.zeros(grid)
    np.add.at(folded, n % grid, psi(n))
    return float(np.mean(np.abs(np.fft.fft(folded))))


def poisson_fourier(psi: SampledCutoff, t, xi_max: float = 400.0) -> np.ndarray:
    """psi^(t) = N sum_k g^(N (k + t)) for the smooth interval majorant."""
    if psi.name != "smooth" or psi.scale is None:
        raise PreconditionError("Poisson form is available for the smooth interval majorant")
    N = psi.scale
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    K = int(math.ceil(xi_max / N)) + 1
    k = np.arange(-K, K + 1)
    xi = N * (k[None, :] + t[:, None])
    # g = 1_[0,3] * f has g^ = f^ times the transform of 1_[0,3]
    box = np.where(xi == 0, 3.0, np.sin(3 * np.pi * xi) / (np.pi * np.where(xi == 0, 1, xi)))
    ghat = np.exp(-3j * np.pi * xi) * box * bump_hat(xi)
    return N * ghat.sum(axis=1)


# --------------------------------------------------------------------------
# torus majorants and minorants

def _wrap(x):
    # representative in [-1/2, 1/2)
    return (np.asarray(x, dtype=np.float64) + 0.5) % 1.0 - 0.5


def torus_ball_cutoff(radius: float, width: float, d: int, name: str = "") -> SampledCutoff:
    """prod_i (1_[-radius, radius] * f_width)(x_i) on T^d."""
    if radius + width >= 0.5:
        raise PreconditionError("radius + width must be < 1/2")

    def psi(x):
        x = _wrap(x)
        if d == 1 and x.ndim <= 1:
            return smoothed_indicator(x, radius, width)
        return np.prod(smoothed_indicator(x, radius, width), axis=-1)

    return SampledCutoff("torus", psi, (radius + width,), name=name, dim=d, radius=radius, width=width)


def _check_eps(eps: float, d: int) -> float:
    if not 0 < eps < 0.25:
        raise PreconditionError("need 0 < eps < 1/4")
    if not 1 <= d <= 3:
        raise PreconditionError("need 1 <= d <= 3")
    return eps / (10 * d)


def torus_majorant(eps: float, d: int) -> SampledCutoff:
    """1_{B_(eps + e')} * f_e' with e' = eps/(10d): equal to 1 on B_eps."""
    ep = _check_eps(eps, d)
    return torus_ball_cutoff(eps + ep, ep, d, name="majorant")


def torus_minorant(eps: float, d: int) -> SampledCutoff:
    """1_{B_(eps - e')} * f_e': 1 on B_(eps - 2e'), zero off B_eps."""
    ep = _check_eps(eps, d)
    return torus_ball_cutoff(eps - ep, ep, d, name="minorant")


def torus_constant(d: int) -> SampledCutoff:
    return SampledCutoff("torus", lambda x: np.ones(np.shape(x)[:-1] if d > 1 else np.shape(x)),
                         (0.5,), name="constant", dim=d)


def _torus_grid(psi: SampledCutoff, M: int) -> np.ndarray:
    axes = np.arange(M) / M
    if psi.dim == 1:
        return np.asarray(psi(axes), dtype=np.float64)
    mesh = np.stack(np.meshgrid(*([axes] * psi.dim), indexing="ij"), axis=-1)
    return np.asarray(psi(mesh), dtype=np.float64)


@dataclass(frozen=True, eq=False)
class FourierTable:
    """psi^(r) for ||r||_inf <= radius; ``coeffs`` is indexed by r + radius."""

    dim: int
    radius: int
    coeffs: np.ndarray
    error_estimate: float

    def __getitem__(self, r) -> complex:
        r = (r,) if np.ndim(r) == 0 else tuple(r)
        return complex(self.coeffs[tuple(int(v) + self.radius for v in r)])

    def vectors(self) -> np.ndarray:
        ax = np.arange(-self.radius, self.radius + 1)
        return np.stack(np.meshgrid(*([ax] * self.dim), indexing="ij"), axis=-1).reshape(-1, self.dim)

    def partial_sum(self) -> float:
        """sum over r != 0 of |psi^(r)| ||r||_1."""
        r = self.vectors()
        return float(np.sum(np.abs(self.coeffs.ravel()) * np.abs(r).sum(axis=1)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(f"r{i + 1}" for i in range(self.dim)) + ",real,imag,modulus\n")
        for r, c in zip(self.vectors(), self.coeffs.ravel()):
            buf.write(",".join(map(str, r)) + f",{c.real:.17g},{c.imag:.17g},{abs(c):.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "FourierTable":
        lines = [ln for ln in text.strip().splitlines() if ln]
        d = len(lines[0].split(",")) - 3
        rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        R = int(rows[:, :d].max())
        coeffs = (rows[:, d] + 1j * rows[:, d + 1]).reshape((2 * R + 1,) * d)
        return cls(d, R, coeffs, float("nan"))


@dataclass(frozen=True)
class DecayReport:
    """Partial sum of |psi^(r)| ||r||_1 and a power-law fit of the tail.

    ``exponent`` is minus the slope of log(shell max) against log(||r||_inf)
    over dyadic shells in ``window`` whose maxima exceed the noise floor.
    """

    radius: int
    partial_sum: float
    exponent: float
    window: tuple[int, int]
    shells: tuple


def _decay_fit(shell_max: np.ndarray, start: int, radius: int):
    pts = []
    j = max(1, start)
    while j <= radius:
        top = min(2 * j, radius + 1)
        m = float(shell_max[j:top].max())
        if m > COEFFICIENT_FLOOR * 100:
            pts.append((j, m))
        j *= 2
    if len(pts) < 2:
        return float("nan"), tuple(pts)
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope), tuple(pts)


def torus_fourier_decay(psi: SampledCutoff, radius: int, resolution: int = 1 << 12,
                        table_budget: int = 10**7) -> tuple[FourierTable, DecayReport]:
    """Fourier coefficients of a torus cutoff and a fitted decay exponent.

    Separable cutoffs use the closed form and are cross-checked against the
    tensor trapezoid rule at ``resolution`` points per axis; other cutoffs use
    the trapezoid values directly (d <= 2).  The fit window starts at
    ||r||_inf = 1/width, past which the bump factor dominates.
    """
    if psi.domain != "torus":
        raise PreconditionError("expects a torus cutoff")
    d = psi.dim
    if resolution < 1 << 10:
        raise PreconditionError("resolution must be >= 2^10 per axis")
    if (2 * radius + 1) ** d > table_budget:
        raise BudgetExceeded("Fourier table exceeds budget")
    r1 = np.arange(-radius, radius + 1)

    if psi.separable:
        a = psi.coef1d(r1)
        # trapezoid check on the one-dimensional factor
        M = max(resolution, 4 * radius + 4)
        xs = _wrap(np.arange(M) / M)
        quad_coef = np.fft.fft(smoothed_indicator(xs, psi.radius, psi.width)) / M
        err = float(np.max(np.abs(quad_coef[r1 % M] - a)))
        big = np.abs(a)[np.abs(a) > 1e-6]
        if big.size and err > 0.01 * big.min():
            raise ConstructionError(f"quadrature error {err:.3g} exceeds 1% of smallest coefficient")
        coeffs = a.astype(complex)
        for _ in range(d - 1):
            coeffs = np.multiply.outer(coeffs, a)
        A = np.abs(a)
        S0 = A.sum()
        S1 = float(np.sum(A * np.abs(r1)))
        psum = d * S1 * S0 ** (d - 1)
        amax = np.maximum.accumulate(np.maximum(A[radius:], A[radius::-1]))
        shell = np.maximum(A[radius:], A[radius::-1]) * amax ** (d - 1)
        start = int(math.ceil(1.0 / psi.width))
        err_est = err
    else:
        if d > 2:
            raise PreconditionError("non-separable cutoffs limited to d <= 2")
        M = max(resolution, 2 * radius + 2)
        vals = _torus_grid(psi, M)
        full = np.fft.fftn(vals) / M**d
        half = np.fft.fftn(_torus_grid(psi, M // 2)) / (M // 2) ** d
        idx = np.ix_(*([r1 % M] * d))
        idx_half = np.ix_(*([r1 % (M // 2)] * d))
        coeffs = full[idx]
        err_est = float(np.max(np.abs(coeffs - half[idx_half]))) if M // 2 > 2 * radius else float("nan")
        table = FourierTable(d, radius, coeffs, err_est)
        psum = table.partial_sum()
        absc = np.abs(coeffs)
        norm_inf = np.max(np.abs(table.vectors()), axis=1).reshape(absc.shape)
        shell = np.array([absc[norm_inf == s].max() for s in range(radius + 1)])
        start = 1
    table = FourierTable(d, radius, np.asarray(coeffs), err_est)
    start = min(start, max(1, radius // 4))
    exponent, pts = _decay_fit(np.asarray(shell), start, radius)
    return table, DecayReport(radius, float(psum), exponent, (start, radius), pts)


def torus_partial_sum(psi: SampledCutoff, radius: int) -> float:
    """sum over 0 < ||r||_inf <= radius of |psi^(r)| ||r||_1 (separable cutoffs)."""
    r1 = np.arange(-radius, radius + 1)
    A = np.abs(psi.coef1d(r1))
    return float(psi.dim * np.sum(A * np.abs(r1)) * A.sum() ** (psi.dim - 1))


# --------------------------------------------------------------------------
# the Bohr-type cutoff chi

@dataclass(frozen=True)
class ChiParams:
    N: int
    q: int
    u: int
    x: float
    eps: float
    eps_prime: float
    theta: TorusVector
    z: TorusVector


@dataclass(frozen=True)
class SandwichReport:
    n_range: tuple[int, int]
    checked: int
    in_X: int
    in_X_minus: int
    max_excess: float
    min_deficit: float
    ok: bool


class ChiCutoff(SampledCutoff):
    """chi(n) = g(n/N) h(theta n) 1[n = u mod q] with its parameters."""

    params: ChiParams
    report: SandwichReport

    def in_set(self, n, shrink: float = 0.0) -> np.ndarray:
        """Membership in X (shrink = 0) or X_- (shrink = eps')."""
        p = self.params
        n = np.asarray(n, dtype=np.int64)
        r = p.eps - shrink
        close = np.abs(n / p.N - p.x) <= r
        if p.theta.dim:
            close &= torus_offset_norm(p.theta, p.z, n) <= r
        return close & ((n - p.u) % p.q == 0)

    def mass(self, n_range=None) -> float:
        lo, hi = n_range if n_range is not None else self.support
        return float(np.sum(self(np.arange(lo, hi + 1))))


def _chi_eval(p: ChiParams):
    rg = p.eps - p.eps_prime / 2
    w = p.eps_prime / 2
    zc = p.z.as_array()

    def chi(n):
        n = np.asarray(n, dtype=np.int64)
        val = smoothed_indicator(n / p.N - p.x, rg, w)
        if p.theta.dim:
            phase = torus_phase(p.theta, n).reshape(n.shape + (p.theta.dim,))
            val = val * np.prod(smoothed_indicator(_wrap(phase - zc), rg, w), axis=-1)
        return np.where((n - p.u) % p.q == 0, val, 0.0)

    return chi


def chi_cutoff(N: int, q: int, u: int, x: float, eps: float, eps_prime: float,
               theta: TorusVector, z: TorusVector,
               certificate: IrrationalityCertificate | None = None,
               verify_range: tuple[int, int] | None = None, tol: float = 1e-9) -> ChiCutoff:
    """Smooth chi with 1_{X_-} <= chi <= 1_X, checked pointwise before returning.

    X = {n = u mod q : |n/N - x| <= eps, ||theta n - z|| <= eps} and X_- is the
    same with eps - eps'.  ``certificate`` must certify theta as irrational.
    The sandwich is checked on ``verify_range`` (default: [N, 2N] together
    with the support); a violation raises :class:`ConstructionError`.
    """
    if not isinstance(theta, TorusVector):
        theta = TorusVector(theta)
    if not isinstance(z, TorusVector):
        z = TorusVector(z)
    d = theta.dim
    if z.dim != d:
        raise PreconditionError("theta and z must have the same dimension")
    if N < 1 or q < 1:
        raise PreconditionError("need N, q >= 1")
    if not 0 < eps_prime < eps / (10 * max(d, 1)):
        raise PreconditionError("need 0 < eps' < eps / 10d")
    if d and eps >= 0.5:
        raise PreconditionError("need eps < 1/2 on the torus")
    if d:
        if certificate is None:
            raise PreconditionError("theta needs an irrationality certificate")
        if not certificate.irrational or certificate.theta != theta:
            raise PreconditionError("certificate does not certify this theta")
    p = ChiParams(N, q, u % q, float(x), float(eps), float(eps_prime), theta, z)
    lo = math.floor(N * (p.x - p.eps)) - 1
    hi = math.ceil(N * (p.x + p.eps)) + 1
    chi = ChiCutoff("integers", _chi_eval(p), (lo, hi), name="chi", dim=d, scale=N)
    object.__setattr__(chi, "params", p)

    a, b = verify_range if verify_range is not None else (min(N, lo), max(2 * N, hi))
    n = np.arange(a, b + 1)
    vals = chi(n)
    inX, inXm = chi.in_set(n), chi.in_set(n, p.eps_prime)
    excess = float(np.max(vals - inX, initial=0.0))
    deficit = float(np.max(inXm - vals, initial=0.0))
    ok = excess <= tol and deficit <= tol and float(vals.min(initial=0.0)) >= -tol
    rep = SandwichReport((a, b), n.size, int(inX.sum()), int(inXm.sum()), excess, deficit, ok)
    object.__setattr__(chi, "report", rep)
    if not ok:
        raise ConstructionError(f"sandwich violated: excess {excess:.3g}, deficit {deficit:.3g}")
    return chi


def chi_mass_bound(chi: ChiCutoff) -> float:
    """The lower bound (1/2) (2 eps)^(d+1) N / q for sum_n chi(n)."""
    p = chi.params
    return 0.5 * (2 * p.eps) ** (p.theta.dim + 1) * p.N / p.q
