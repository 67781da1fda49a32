"""Largest S in Z/qZ whose sumset S + S avoids the squares mod q.

S + S includes the doubles x + x, and the squares include 0 and non-units.
The maximum is found exactly as a maximum independent set of the conflict
graph on {x : 2x not a square}, with x ~ y when x + y is a square.  The
Lagarias-Odlyzko-Shearer bound says the maximum never exceeds 11q/32.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, PreconditionError
from .numtheory import qr_set

DEFAULT_Q_LIMIT = 36
DEFAULT_NODE_BUDGET = 5 * 10**6


@dataclass(frozen=True)
class QrFreeResult:
    q: int
    max_size: int
    witness: tuple[int, ...]
    nodes: int = 0

    @property
    def bound(self) -> int:
        return 11 * self.q // 32

    @property
    def ok(self) -> bool:
        return self.max_size <= self.bound


def is_qr_sumset_free(S, q: int) -> bool:
    Q = qr_set(q)
    S = list(S)
    return all((x + y) % q not in Q for i, x in enumerate(S) for y in S[i:])


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Search:
    """Bitset branch and bound for a maximum independent set."""

    def __init__(self, adj: list[int], budget: int):
        self.adj = adj
        self.budget = budget
        self.nodes = 0

    def cover_bound(self, cand: int) -> int:
        # greedy partition of cand into cliques; an independent set meets each at most once
        commons: list[int] = []
        for v in _bits(cand):
            for i, c in enumerate(commons):
                if c >> v & 1:
                    commons[i] = c & self.adj[v]
                    break
            else:
                commons.append(self.adj[v])
        return len(commons)

    def run(self, cand: int, floor: int, stop_at: int | None = None) -> tuple[int, int]:
        """Best (size, mask) with size > floor, or (floor, 0) if none exists."""
        best = [floor, 0]

        def rec(cur: int, size: int, cand: int) -> bool:
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"search exceeded {self.budget} nodes")
            if not cand:
                if size > best[0]:
                    best[0], best[1] = size, cur
                    return stop_at is not None and size >= stop_at
                return False
            if size + self.cover_bound(cand) <= best[0]:
                return False
            v = max(_bits(cand), key=lambda u: ((self.adj[u] & cand).bit_count(), -u))
            bit = 1 << v
            if rec(cur | bit, size + 1, cand & ~self.adj[v] & ~bit):
                return True
            return rec(cur, size, cand & ~bit)

        rec(0, 0, cand)
        return best[0], best[1]


def max_qr_sumset_free(q: int, q_limit: int = DEFAULT_Q_LIMIT,
                       budget: int = DEFAULT_NODE_BUDGET) -> QrFreeResult:
    """Exact maximum with the lexicographically least extremal witness."""
    if q < 1:
        raise PreconditionError("q must be >= 1")
    if q > q_limit:
        raise PreconditionError(f"q must be <= {q_limit} (raise q_limit to override)")
    Q = qr_set(q)
    allowed = [x for x in range(q) if (2 * x) % q not in Q]
    adj = [0] * q
    for x in allowed:
        for y in allowed:
            if x != y and (x + y) % q in Q:
                adj[x] |= 1 << y
    search = _Search(adj, budget)
    full = sum(1 << x for x in allowed)
    best, _ = search.run(full, -1)
    best = max(best, 0)

    # lexicographically least witness: fix elements in increasing order
    chosen, cand = 0, full
    for x in allowed:
        if chosen.bit_count() == best:
            break
        if not cand >> x & 1:
            continue
        bit = 1 << x
        trial = cand & ~adj[x] & ~bit & ~((1 << (x + 1)) - 1)
        need = best - chosen.bit_count() - 1
        size, _ = search.run(trial, need - 1, stop_at=need) if need > 0 else (0, 0)
        if size >= need:
            chosen |= bit
            cand = trial
        else:
            cand &= ~bit
    witness = tuple(_bits(chosen))
    return QrFreeResult(q, best, witness, search.nodes)


def verify_los(q_max: int, q_limit: int = DEFAULT_Q_LIMIT,
               budget: int = DEFAULT_NODE_BUDGET) -> list[QrFreeResult]:
    """max_qr_sumset_free for q = 1, ..., q_max; check ``r.ok`` on each row."""
    return [max_qr_sumset_free(q, q_limit, budget) for q in range(1, q_max + 1)]


def los_table_csv(rows: list[QrFreeResult]) -> str:
    lines = ["q,max_size,bound,ok,witness"]
    for r in rows:
        w = " ".join(map(str, r.witness))
        lines.append(f"{r.q},{r.max_size},{r.bound},{int(r.ok)},{w}")
    return "\n".join(lines) + "\n"
