import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import colourable, mono_solutions
from rsl.colouring import (
    TRIVIAL, Colouring, count_mono_mod_p, dyadic_block_colours, dyadic_colouring,
    find_mono_solutions, has_nontrivial_solution, search_2colouring, threshold_2colouring,
)
from rsl.errors import BudgetExceeded, PreconditionError


def colourings(max_n=40, max_k=3):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(st.integers(1, max_k), st.just(n)).flatmap(
            lambda kn: st.lists(st.integers(0, kn[0] - 1), min_size=kn[1], max_size=kn[1]).map(
                lambda cols: Colouring(1, kn[1], kn[0], np.array(cols)))))


def test_block_colours_rule():
    c = dyadic_block_colours(40)
    assert c[:3] == [0, 1, 2]
    for i in range(3, 41):
        assert c[i] not in (c[i // 2], c[i // 2 + 1])


def test_dyadic_blocks_constant():
    c = dyadic_colouring(100)
    for i in range(7):
        block = range(2**i, min(2 ** (i + 1), 101))
        assert len({c[n] for n in block}) == 1


def test_dyadic_colouring_only_trivial_solution():
    c = dyadic_colouring(20000)
    assert find_mono_solutions(c) == []
    sols = find_mono_solutions(c, include_trivial=True)
    assert [s.triple for s in sols] == [TRIVIAL]


@given(st.integers(1, 4096))
def test_dyadic_prefixes_valid(n):
    assert not has_nontrivial_solution(dyadic_colouring(n))


@given(colourings())
def test_find_mono_matches_oracle(c):
    got = [s.triple for s in find_mono_solutions(c)]
    want = mono_solutions({n: c[n] for n in range(c.lo, c.hi + 1)})
    assert sorted(got) == sorted(want)


@given(colourings(max_n=60, max_k=36))
def test_text_round_trip(c):
    assert Colouring.from_text(c.to_text()) == c


def test_text_format_header():
    c = Colouring(3, 5, 2, np.array([0, 1, 1]))
    assert c.to_text() == "colouring k=2 lo=3 hi=5\n011\n"
    with pytest.raises(PreconditionError):
        Colouring.from_text("palette k=2 lo=1 hi=1\n0\n")
    with pytest.raises(PreconditionError):
        Colouring(1, 3, 2, np.array([0, 1]))
    with pytest.raises(PreconditionError):
        Colouring(1, 2, 2, np.array([0, 2]))


@given(st.integers(2, 23).flatmap(lambda p: st.lists(st.integers(0, 2), min_size=p, max_size=p)))
def test_count_mod_p_brute(cols):
    p = len(cols)
    brute = sum(1 for x in range(p) for y in range(p) for z in range(p)
                if (x + y - z * z) % p == 0 and cols[x] == cols[y] == cols[z])
    assert count_mono_mod_p(np.array(cols)) == brute


def test_every_colouring_mod_p_has_solutions():
    # x = y = z = 0 is always a solution
    assert count_mono_mod_p(np.array([0, 1, 0, 1, 1])) >= 1


@pytest.mark.parametrize("n", [5, 10, 20, 31])
def test_search_finds_valid(n):
    c = search_2colouring(n)
    assert c is not None and c.k == 2 and (c.lo, c.hi) == (1, n)
    assert not mono_solutions({m: c[m] for m in range(1, n + 1)})


def test_threshold_matches_oracle():
    oracle = next(n for n in range(2, 100) if not colourable(n))
    assert threshold_2colouring() == oracle == 32
    assert search_2colouring(32) is None


@given(st.integers(1, 40))
def test_search_agrees_with_oracle(n):
    assert (search_2colouring(n) is not None) == colourable(n)


def test_search_budget():
    with pytest.raises(BudgetExceeded):
        search_2colouring(31, budget=10)
