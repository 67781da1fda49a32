"""Colourings of integer intervals and monochromatic solutions of x + y = z^2.

The dyadic 3-colouring gives every block A_i = [2^i, 2^(i+1)) a single colour
c_i, with c_0, c_1, c_2 distinct and c_i chosen greedily outside
{c_(i//2), c_(i//2 + 1)}.  Its only monochromatic solution is 2 + 2 = 2^2.

For two colours the picture is the opposite; :func:`search_2colouring` and
:func:`threshold_2colouring` find how far an initial segment [1, n] can be
2-coloured before a nontrivial monochromatic solution becomes unavoidable.
"""
from __future__ import annotations

import string
import sys
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import BudgetExceeded, PreconditionError

TRIVIAL = (2, 2, 2)
DEFAULT_SEARCH_BUDGET = 10**7

_DIGITS = string.digits + string.ascii_lowercase


@dataclass(frozen=True, eq=False)
class Colouring:
    """Total map from {lo, ..., hi} to colours {0, ..., k-1}."""

    lo: int
    hi: int
    k: int
    colours: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.colours, dtype=np.uint8).copy()
        if not 1 <= self.k <= 255:
            raise PreconditionError("number of colours must be in [1, 255]")
        if self.hi < self.lo or len(cols) != self.hi - self.lo + 1:
            raise PreconditionError("colour array must cover [lo, hi] exactly")
        if cols.size and int(cols.max()) >= self.k:
            raise PreconditionError("colour index out of range")
        cols.setflags(write=False)
        object.__setattr__(self, "colours", cols)

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, Colouring) and (self.lo, self.hi, self.k) == (other.lo, other.hi, other.k)
                and np.array_equal(self.colours, other.colours))

    def __hash__(self) -> int:
        return hash((self.lo, self.hi, self.k, self.colours.tobytes()))

    def colour(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside [{self.lo}, {self.hi}]")
        return int(self.colours[n - self.lo])

    __getitem__ = colour

    def colour_class(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.colours == c) + self.lo

    def to_text(self) -> str:
        """Header line then one digit (0-9a-z) per integer, lo first."""
        if self.k > len(_DIGITS):
            raise PreconditionError(f"text format supports at most {len(_DIGITS)} colours")
        body = "".join(_DIGITS[c] for c in self.colours.tolist())
        return f"colouring k={self.k} lo={self.lo} hi={self.hi}\n{body}\n"

    @classmethod
    def from_text(cls, text: str) -> "Colouring":
        lines = text.splitlines()
        if not lines:
            raise PreconditionError("empty colouring text")
        head = lines[0].split()
        if not head or head[0] != "colouring":
            raise PreconditionError("missing 'colouring' header")
        try:
            fields = dict(tok.split("=", 1) for tok in head[1:])
            k, lo, hi = int(fields["k"]), int(fields["lo"]), int(fields["hi"])
        except (KeyError, ValueError) as exc:
            raise PreconditionError(f"malformed header: {lines[0]!r}") from exc
        body = "".join(lines[1:]).strip()
        try:
            cols = [_DIGITS.index(ch) for ch in body]
        except ValueError as exc:
            raise PreconditionError("invalid colour digit") from exc
        return cls(lo, hi, k, np.array(cols, dtype=np.uint8))


@dataclass(frozen=True, order=True)
class MonoSolution:
    """x + y = z^2 with x <= y and all three sharing ``colour``."""

    z: int
    x: int
    y: int
    colour: int

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


# --------------------------------------------------------------------------
# the dyadic 3-colouring

def dyadic_block_colours(i_max: int) -> list[int]:
    """Colours c_0, ..., c_(i_max) of the dyadic blocks (greedy least colour)."""
    c = [0, 1, 2][: i_max + 1]
    for i in range(3, i_max + 1):
        banned = {c[i // 2], c[i // 2 + 1]}
        c.append(min(set(range(3)) - banned))
    return c


def dyadic_colouring(n_max: int) -> Colouring:
    """3-colouring of [1, n_max] that is constant on each dyadic block."""
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    blocks = dyadic_block_colours(n_max.bit_length() - 1)
    cols = np.empty(n_max, dtype=np.uint8)
    for i, ci in enumerate(blocks):
        cols[(1 << i) - 1: min(1 << (i + 1), n_max + 1) - 1] = ci
    return Colouring(1, n_max, 3, cols)


# --------------------------------------------------------------------------
# monochromatic solutions

def find_mono_solutions(c: Colouring, include_trivial: bool = False) -> list[MonoSolution]:
    """All monochromatic x + y = z^2 with x, y, z in [lo, hi] and x <= y.

    Sorted by (z, x).  The trivial solution (2, 2, 2) is dropped unless
    ``include_trivial``.
    """
    lo, hi, cols = c.lo, c.hi, c.colours
    out = []
    z0 = max(lo, 1)
    for z in range(z0, hi + 1):
        s = z * z
        if s > 2 * hi:
            break
        x_lo, x_hi = max(lo, 1, s - hi), s // 2
        if x_lo > x_hi:
            continue
        cz = cols[z - lo]
        xs = cols[x_lo - lo: x_hi - lo + 1]
        # y = s - x runs downwards from s - x_lo
        ys = cols[s - x_hi - lo: s - x_lo - lo + 1][::-1]
        hit = np.flatnonzero((xs == cz) & (ys == cz))
        for j in hit.tolist():
            x = x_lo + j
            if (x, s - x, z) == TRIVIAL and not include_trivial:
                continue
            out.append(MonoSolution(z, x, s - x, int(cz)))
    return out


def has_nontrivial_solution(c: Colouring) -> bool:
    return bool(find_mono_solutions(c))


def count_mono_mod_p(c) -> int:
    """Count (x, y, z) in (Z/pZ)^3 with x + y = z^2 and one colour.

    ``c`` is a :class:`Colouring` of {0, ..., p-1} or a plain colour array.
    """
    cols = c.colours if isinstance(c, Colouring) else np.asarray(c)
    if isinstance(c, Colouring) and c.lo != 0:
        raise PreconditionError("a colouring of Z/pZ must start at 0")
    p = len(cols)
    if p < 1:
        raise PreconditionError("empty colouring")
    x = np.arange(p)
    total = 0
    for z in range(p):
        s = z * z % p
        cz = cols[z]
        total += int(np.count_nonzero((cols == cz) & (cols[(s - x) % p] == cz)))
    return total


# --------------------------------------------------------------------------
# 2-colouring search

def _triples_by_max(n_max: int) -> list[list[tuple[int, int, int]]]:
    """For each m, the nontrivial triples (x, y, z) whose largest entry is m."""
    by_max: list[list[tuple[int, int, int]]] = [[] for _ in range(n_max + 1)]
    for z in range(1, isqrt(2 * n_max) + 1):
        s = z * z
        for x in range(max(1, s - n_max), s // 2 + 1):
            t = (x, s - x, z)
            if t != TRIVIAL:
                by_max[max(t)].append(t)
    return by_max


def search_2colouring(n_max: int, budget: int = DEFAULT_SEARCH_BUDGET) -> Colouring | None:
    """A 2-colouring of [1, n_max] without nontrivial monochromatic solutions.

    Depth-first over n = 1, 2, ... with colour 0 tried first and colour(1)
    fixed to 0.  After each assignment any triple with two equal colours and
    one free entry forces that entry to the other colour.  Returns ``None``
    when no such colouring exists; raises :class:`BudgetExceeded` if more
    than ``budget`` assignments are tried.
    """
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    by_max = _triples_by_max(n_max)
    touching: list[list[tuple[int, ...]]] = [[] for _ in range(n_max + 1)]
    for ts in by_max:
        for t in ts:
            members = tuple(sorted(set(t)))
            for v in members:
                touching[v].append(members)

    col = [-1] * (n_max + 1)
    trail: list[int] = []
    work = 0

    def assign(v: int, c: int) -> bool:
        # set v := c and propagate; False on conflict (trail records what to undo)
        nonlocal work
        queue = [(v, c)]
        while queue:
            u, cu = queue.pop()
            if col[u] != -1:
                if col[u] != cu:
                    return False
                continue
            work += 1
            if work > budget:
                raise BudgetExceeded(f"2-colouring search exceeded {budget} assignments")
            col[u] = cu
            trail.append(u)
            for members in touching[u]:
                free = [w for w in members if col[w] == -1]
                seen = {col[w] for w in members if col[w] != -1}
                if len(seen) == 1:
                    if not free:
                        return False
                    if len(free) == 1:
                        queue.append((free[0], 1 - seen.pop()))
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            col[trail.pop()] = -1

    def rec(n: int) -> bool:
        while n <= n_max and col[n] != -1:
            n += 1
        if n > n_max:
            return True
        for c in ((0,) if n == 1 else (0, 1)):
            mark = len(trail)
            if assign(n, c) and rec(n + 1):
                return True
            undo(mark)
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n_max + 1000))
    try:
        found = rec(1)
    finally:
        sys.setrecursionlimit(old)
    if not found:
        return None
    return Colouring(1, n_max, 2, np.array(col[1:], dtype=np.uint8))


def threshold_2colouring(budget: int = DEFAULT_SEARCH_BUDGET, start: int = 4) -> int:
    """Smallest n for which [1, n] has no valid 2-colouring.

    Doubles n until the search fails, then bisects; valid because a good
    colouring of [1, n] restricts to one of [1, n - 1].
    """
    lo = start
    if search_2colouring(lo, budget) is None:
        lo, hi = 0, lo
    else:
        hi = 2 * lo
        while search_2colouring(hi, budget) is not None:
            lo, hi = hi, 2 * hi
    # invariant: lo colourable (or 0), hi not
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if search_2colouring(mid, budget) is None:
            hi = mid
        else:
            lo = mid
    return hi
