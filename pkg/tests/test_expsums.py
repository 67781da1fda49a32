import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import r3_naive
from rsl.errors import PreconditionError
from rsl.expsums import (
    PolynomialPhase, lp_moment, moment_report, rep_counts_3, sixth_moment, squares_upto,
    weyl_check, weyl_sum,
)
from rsl.numtheory import TorusVector


def naive_sum(coeffs, lo, hi):
    k = len(coeffs) - 1
    return sum(cmath.exp(2j * math.pi * float(sum(Fraction(c) * n ** (k - i) for i, c in enumerate(coeffs)) % 1))
               for n in range(lo, hi + 1))


def test_weyl_quarter_example():
    s = weyl_sum(PolynomialPhase((Fraction(1, 4), 0, 0)), (0, 7))
    assert s == pytest.approx(4 + 4j, abs=1e-12)
    assert weyl_sum(PolynomialPhase((Fraction(1, 4), 0, 0)), (0, 3)) == pytest.approx(2 + 2j)


@given(st.lists(st.fractions(0, 1, max_denominator=1000), min_size=1, max_size=4),
       st.integers(-50, 50), st.integers(0, 200))
def test_weyl_matches_naive(coeffs, lo, length):
    s = weyl_sum(PolynomialPhase(tuple(coeffs)), (lo, lo + length))
    assert s == pytest.approx(naive_sum(coeffs, lo, lo + length), abs=1e-8)


def test_weyl_range_and_errors():
    g = PolynomialPhase.monomial(Fraction(1, 3), 1)
    assert weyl_sum(g, range(0, 3)) == pytest.approx(0, abs=1e-12)
    with pytest.raises(PreconditionError):
        PolynomialPhase((1,) * 10)
    with pytest.raises(PreconditionError):
        weyl_check(TorusVector.of(0.5), [0], 2, (1, 10))


def test_weyl_check_examples():
    rep = weyl_check(TorusVector.of(Fraction(1, 4)), [1], 2, (1, 1000))
    assert rep.delta == pytest.approx(math.sqrt(2) / 2, abs=1e-3) and rep.q == 4 and rep.distance == 0
    phi = (math.sqrt(5) - 1) / 2
    assert weyl_check(TorusVector.of(phi), [1], 2, (1, 1000)).delta < 0.2


@given(st.lists(st.integers(0, 300), min_size=1, max_size=25, unique=True))
def test_rep_counts_match_naive(S):
    naive = r3_naive(S)
    for method in ("fft", "direct"):
        prof = rep_counts_3(S, method)
        assert {x: prof[x] for x in naive} == naive
        assert prof.mass == len(S) ** 3
    assert sixth_moment(S) == sum(v * v for v in naive.values())


def test_sixth_moment_small():
    assert sixth_moment([1, 4]) == 20


def test_lp_moment_parseval():
    S = squares_upto(400)
    assert lp_moment(S, 2) == pytest.approx(len(S))
    assert lp_moment(S, 6) == pytest.approx(sixth_moment(S), rel=1e-9)


def test_squares_ratio_bounded():
    ratios = [moment_report(squares_upto(N))["ratio_to_N2"] for N in (10**2, 10**3, 10**4)]
    assert all(0.5 < r < 1.2 for r in ratios)


def test_moment_report_fields():
    rep = moment_report(squares_upto(100), (6, 4))
    assert rep["N"] == 100 and rep["size"] == 10
    assert rep["moment_4"] == pytest.approx(sum(v * v for v in np.convolve(*[np.bincount(squares_upto(100))] * 2)))


def test_set_validation():
    with pytest.raises(PreconditionError):
        rep_counts_3([])
    with pytest.raises(PreconditionError):
        rep_counts_3([-1, 2])
