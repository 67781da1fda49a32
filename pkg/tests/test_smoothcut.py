import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from rsl.errors import PreconditionError
from rsl.numtheory import TorusVector, certify_irrational
from rsl.smoothcut import (
    FourierTable, base_bump, bump_cdf, bump_constant, bump_hat, bump_mass, chi_cutoff,
    chi_mass_bound, indicator_cutoff, integer_fourier, interval_majorant, l1_fourier_norm,
    poisson_fourier, smoothed_indicator, smoothed_indicator_hat, torus_constant,
    torus_fourier_decay, torus_majorant, torus_minorant, torus_partial_sum,
)


def test_bump_constants():
    assert bump_constant() == pytest.approx(2.2522836210435813, rel=1e-12)
    assert bump_mass() == pytest.approx(0.44399381616807937, rel=1e-12)
    assert base_bump(0.0) == pytest.approx(bump_constant() / math.e)
    assert base_bump(1.0) == 0.0 and base_bump(-3.0) == 0.0


@given(st.floats(-1.5, 1.5))
def test_bump_cdf_against_quad(x):
    want = quad(base_bump, -1, min(max(x, -1), 1), epsabs=1e-13)[0] if x > -1 else 0.0
    assert float(bump_cdf(x)) == pytest.approx(want, abs=1e-9)


def test_bump_cdf_exact_outside():
    assert bump_cdf(np.array([-1.0, -5.0])).tolist() == [0.0, 0.0]
    assert bump_cdf(np.array([1.0, 7.0])).tolist() == [1.0, 1.0]
    xs = np.linspace(-1, 1, 2001)
    assert np.all(np.diff(bump_cdf(xs)) >= 0)


@pytest.mark.parametrize("xi", [0.0, 0.3, 1.7, 5.0, 20.0])
def test_bump_hat_against_quad(xi):
    want = quad(lambda t: base_bump(t) * math.cos(2 * math.pi * xi * t), -1, 1, limit=400, epsabs=1e-14)[0]
    assert float(bump_hat(xi)) == pytest.approx(want, abs=1e-11)


def test_smoothed_indicator_hat_matches_fft():
    R, w, M = 0.2, 0.02, 1 << 14
    x = (np.arange(M) / M + 0.5) % 1.0 - 0.5
    fft = np.fft.fft(smoothed_indicator(x, R, w)) / M
    r = np.arange(-40, 41)
    assert np.allclose(fft[r % M].real, smoothed_indicator_hat(r, R, w), atol=1e-10)


@pytest.mark.parametrize("kind", ["smooth", "trapezoid"])
@pytest.mark.parametrize("N", [16, 100, 1000])
def test_interval_majorant_dominates(kind, N):
    psi = interval_majorant(N, kind)
    lo, hi = psi.support
    n = np.arange(lo - 5, hi + 6)
    v = psi(n)
    assert np.all(v >= -1e-15) and np.all(v <= 1 + 1e-15)
    assert np.all(v[(n >= N) & (n < 2 * N)] == 1.0)
    assert np.all(v[(n <= lo) | (n >= hi)] == 0.0)


@pytest.mark.parametrize("kind", ["smooth", "trapezoid"])
def test_l1_norms_uniform(kind):
    norms = [l1_fourier_norm(interval_majorant(2**j, kind)) for j in range(6, 13)]
    assert max(norms) / min(norms) <= 1.10


def test_sharp_indicator_norm_grows():
    a = l1_fourier_norm(indicator_cutoff(64, 128))
    b = l1_fourier_norm(indicator_cutoff(4096, 8192))
    assert b > a + 1.0


def test_poisson_matches_direct():
    psi = interval_majorant(200, "smooth")
    t = np.array([0.0, 0.001, 0.01, 0.1, 0.37])
    assert np.allclose(poisson_fourier(psi, t), integer_fourier(psi, t), atol=1e-8)


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
def test_torus_sandwich_and_mass(d, eps):
    rng = np.random.default_rng(7)
    x = rng.random((20000, d)) if d > 1 else rng.random(20000)
    norm = np.abs((x + 0.5) % 1.0 - 0.5)
    norm = norm.max(axis=-1) if d > 1 else norm
    up, down = torus_majorant(eps, d)(x), torus_minorant(eps, d)(x)
    inside = (norm <= eps).astype(float)
    assert np.all(up >= inside - 1e-12) and np.all(down <= inside + 1e-12)
    assert np.all(down >= -1e-15) and np.all(up <= 1 + 1e-12)
    for psi in (torus_majorant(eps, d), torus_minorant(eps, d)):
        assert 0.5 <= psi.integral() / (2 * eps) ** d <= 2


def test_torus_preconditions():
    with pytest.raises(PreconditionError):
        torus_majorant(0.3, 1)
    with pytest.raises(PreconditionError):
        torus_majorant(0.1, 4)


def test_fourier_table_and_decay():
    psi = torus_majorant(0.1, 1)
    table, rep = torus_fourier_decay(psi, 512)
    assert table[0].real == pytest.approx(psi.integral())
    assert table[3] == pytest.approx(table[-3])
    assert rep.partial_sum == pytest.approx(torus_partial_sum(psi, 512))
    assert rep.exponent > 2
    back = FourierTable.from_csv(table.to_csv())
    assert np.allclose(back.coeffs, table.coeffs, rtol=1e-15, atol=0)


def test_partial_sums_converge():
    psi = torus_majorant(0.1, 1)
    sums = [torus_partial_sum(psi, R) for R in (512, 1024, 2048)]
    assert sums[0] < sums[1] < sums[2]
    assert sums[2] - sums[1] < 0.1 * (sums[1] - sums[0]) + 1e-3


def test_two_dimensional_table_is_product():
    psi = torus_minorant(0.1, 2)
    table, rep = torus_fourier_decay(psi, 64)
    a = psi.coef1d(np.arange(-64, 65))
    assert table[(2, 5)] == pytest.approx(a[66] * a[69])
    assert rep.partial_sum == pytest.approx(table.partial_sum())


def test_non_separable_path():
    const = torus_constant(1)
    table, _ = torus_fourier_decay(const, 8, resolution=1 << 10)
    assert table[0] == pytest.approx(1.0) and abs(table[3]) < 1e-12


def _chi(seed, d=1, N=4000, q=3):
    rng = np.random.default_rng(seed)
    theta = TorusVector(rng.random(d).tolist())
    z = TorusVector(rng.random(d).tolist())
    cert = certify_irrational(theta, 2, N)
    return theta, z, cert


@pytest.mark.parametrize("seed", range(6))
def test_chi_sandwich_and_mass(seed):
    theta, z, cert = _chi(seed)
    if not cert.irrational:
        pytest.skip("random theta not certified")
    chi = chi_cutoff(4000, 3, seed % 3, 1.5, 0.1, 0.005, theta, z, cert)
    assert chi.report.ok
    assert chi.mass() >= chi_mass_bound(chi)
    n = np.arange(*chi.report.n_range)
    v = chi(n)
    assert np.all(v <= chi.in_set(n) + 1e-12) and np.all(v >= chi.in_set(n, 0.005) - 1e-12)


def test_chi_requires_certificate():
    theta = TorusVector.of(0.5)
    with pytest.raises(PreconditionError):
        chi_cutoff(1000, 1, 0, 1.5, 0.1, 0.005, theta, TorusVector.of(0.0))
    bad = certify_irrational(theta, 3, 1000)
    with pytest.raises(PreconditionError):
        chi_cutoff(1000, 1, 0, 1.5, 0.1, 0.005, theta, TorusVector.of(0.0), bad)
    with pytest.raises(PreconditionError):
        chi_cutoff(1000, 1, 0, 1.5, 0.1, 0.05, TorusVector(), TorusVector())


def test_chi_without_torus():
    chi = chi_cutoff(1000, 1, 0, 1.5, 0.1, 0.005, TorusVector(), TorusVector())
    assert chi.mass() == pytest.approx(200, rel=0.05)
