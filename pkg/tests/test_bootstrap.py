from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsl.bootstrap import (
    chain_check, colouring_id, in_square_difference_set, squares_sweep, lemma64_verify,
    sumset_subprogression, sumset_window,
)
from rsl.colouring import Colouring, search_2colouring
from rsl.errors import PreconditionError
from rsl.numtheory import Progression


def test_window_example():
    assert sumset_window(100) == (23, 177)


@pytest.mark.parametrize("m", [100, 200, 500])
def test_window_exhaustive_extremes(m):
    # removing any m/10 indices leaves every window sum realised; check the
    # worst cases (deleting a prefix, a suffix, or both ends)
    lo, hi = sumset_window(m)
    k = m // 10
    for drop in (range(1, k + 1), range(m - k + 1, m + 1),
                 list(range(1, k // 2 + 1)) + list(range(m - k + k // 2 + 1, m + 1))):
        keep = sorted(set(range(1, m + 1)) - set(drop))
        sums = {a + b for a in keep for b in keep}
        assert all(x in sums for x in range(lo, hi + 1))


@given(st.integers(100, 300), st.integers(1, 7), st.integers(-50, 50), st.data())
def test_subprogression_contained(m, q, start, data):
    Q = Progression(start * q, (start + m - 1) * q, 1, q)
    elems = Q.elements()
    drop = data.draw(st.sets(st.sampled_from(elems.tolist()), max_size=m // 10))
    S = np.setdiff1d(elems, np.array(sorted(drop), dtype=np.int64))
    P = sumset_subprogression(Q, S)
    assert P.modulus == q and len(P) >= len(Q)
    sums = set((S[:, None] + S[None, :]).ravel().tolist())
    assert all(int(v) in sums for v in P.elements())


def test_subprogression_examples():
    Q = Progression(1, 100, 1, 1)
    P = sumset_subprogression(Q, range(11, 101))
    assert (P.first, P.last) == (23, 177)
    Q7 = Progression(7, 700, 1, 7)
    assert len(sumset_subprogression(Q7, Q7.elements())) == 155


def test_subprogression_preconditions():
    Q = Progression(1, 100, 1, 1)
    with pytest.raises(PreconditionError):
        sumset_subprogression(Q, range(20, 101))
    with pytest.raises(PreconditionError):
        sumset_subprogression(Progression(1, 50, 1, 1), range(1, 51))
    with pytest.raises(PreconditionError):
        sumset_subprogression(Q, list(range(1, 100)) + [1000])


def brute_member(n, P1, P2):
    e1, e2 = P1.elements().tolist(), P2.elements().tolist()
    excess = {a + b for a in e1 for b in e2}
    return any(a * a + b * b - n * n in excess for a in e1 for b in e2)


@given(st.integers(20, 60), st.integers(1, 3), st.integers(0, 200))
def test_in_square_difference_set_brute(N, q, n):
    P1 = Progression(1, 2, N, q)
    P2 = Progression(1, 2, N, q)
    assert in_square_difference_set(n, P1, P2) == brute_member(n, P1, P2)


def test_squares_no_failures_at_200():
    P = Progression(1, 2, 200, 1)
    rep = lemma64_verify(P, P, (1.5, 2.5))
    assert rep.ok and rep.checked == 201 and not rep.genuine
    assert rep.to_dict()["ok"]


def test_squares_sweep_reaches_zero():
    rows = squares_sweep([300, 600, 1200, 2400, 4800], 3, (Fraction(1), Fraction(2)),
                         (Fraction(1), Fraction(2)), (1.5, 2.5))
    walk = [w for _, w, _ in rows]
    assert walk[-1] == 0 and walk[-2] == 0
    assert walk == sorted(walk, reverse=True)


def test_walk_certificates_are_real():
    P = Progression(1, 2, 150, 2)
    rep = lemma64_verify(P, P, (1.5, 2.5))
    failed = {f.n for f in rep.failures}
    for n in P.elements()[::7].tolist():
        if 1.5 * 150 <= n <= 2.5 * 150 and n % 2 == 0 and n not in failed:
            assert in_square_difference_set(n, P, P)


def test_squares_shape_check():
    P = Progression(1, 2, 100, 1)
    with pytest.raises(PreconditionError):
        lemma64_verify(P, Progression(1, 2, 100, 2), (1.5, 2.5))
    with pytest.raises(PreconditionError):
        lemma64_verify(P, P, (1.0, 2.5))


def test_chain_on_search_colouring():
    c = search_2colouring(31)
    rep = chain_check(c)
    assert rep.ok and rep.testable and rep.ranges == (7, 2, 1)
    assert rep.colouring_id == colouring_id(c) and len(rep.colouring_id) == 16


def test_chain_rejects_bad_colourings():
    with pytest.raises(PreconditionError):
        chain_check(Colouring(1, 20, 2, np.zeros(20)))
    with pytest.raises(PreconditionError):
        chain_check(Colouring(1, 4, 3, np.array([0, 1, 2, 0])))


@given(st.integers(4, 31))
def test_chain_on_prefixes(n):
    c = search_2colouring(n)
    assert chain_check(c).ok
