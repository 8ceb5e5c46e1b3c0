"""Complete-bipartite analogue of the cycle machinery: ordered (S, T) pairs
encoding labelled copies of K_{s,t}, degree tables over sub-pairs with caps
D^(i,j), saturated pairs with their X/Y link sets, and the greedy builder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .graphs import Graph


class KstError(ValueError):
    pass


@dataclass(frozen=True)
class KstParams:
    s: int
    t: int
    k: float  # from e(G) = k * n^(2 - 1/s)
    n: int
    delta: float

    def __post_init__(self):
        if not 2 <= self.s <= self.t:
            raise ValueError("need 2 <= s <= t")
        if self.k <= 0 or self.delta <= 0:
            raise ValueError("k and delta must be positive")

    def dij_cap(self, i: int, j: int) -> float:
        """Max degree of an (A, B) pair with |A| = i, |B| = j."""
        if not 1 <= i <= self.s:
            raise ValueError(f"i must be in [1, {self.s}], got {i}")
        if not 1 <= j <= self.t:
            raise ValueError(f"j must be in [1, {self.t}], got {j}")
        return (self.delta * self.k * self.n ** ((self.s - 1) / self.s)) ** (
            self.s - i
        ) * (self.delta * self.k ** self.s) ** (self.t - j)

    def saturation_floor(self, i: int, j: int) -> int:
        return math.floor(self.dij_cap(i, j))

    def x_cap(self) -> float:
        return self.delta * self.k * self.n ** (1 - 1 / self.s)

    def y_cap(self) -> float:
        return self.delta * self.k ** self.s

    def tau(self) -> float:
        s = self.s
        return max(
            self.k ** (-s),
            self.k ** (-1) * self.n ** (-((s - 1) ** 2) / (s * (s * self.t - 1))),
        )

    def edge_target(self) -> float:
        return self.k ** (self.s * self.t) * self.n ** self.s


def k_of_graph_kst(g: Graph, s: int) -> float:
    return g.m / g.n ** (2 - 1 / s)


def is_complete_bipartite_pair(g: Graph, S: Iterable[int], T: Iterable[int]) -> bool:
    S, T = set(S), set(T)
    if S & T:
        return False
    return all(v in g.adjacency[u] for u in S for v in T)


def enumerate_kst(g: Graph, s: int, t: int) -> list[tuple[tuple, tuple]]:
    """All ordered pairs (S, T) of disjoint vertex sets with |S| = s,
    |T| = t, and every S-T pair adjacent; when s = t both orders appear."""
    if s > t:
        raise ValueError("need s <= t")
    out = []
    for S in combinations(range(g.n), s):
        common = set(range(g.n))
        for u in S:
            common &= g.adjacency[u]
        common -= set(S)
        for T in combinations(sorted(common), t):
            out.append((S, T))
    return out


@dataclass
class PairHypergraph:
    host: Graph
    params: KstParams
    edges: set = field(default_factory=set)  # ordered (S, T) sorted-tuple pairs
    degrees: dict = field(default_factory=dict)  # (A, B) frozenset pair -> count
    saturated: set = field(default_factory=set)
    event_log: list = field(default_factory=list)

    @property
    def s(self) -> int:
        return self.params.s

    @property
    def t(self) -> int:
        return self.params.t

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, A: Iterable[int], B: Iterable[int]) -> int:
        return self.degrees.get((frozenset(A), frozenset(B)), 0)

    def _sub_pairs(self, S: tuple, T: tuple):
        for i in range(1, self.s + 1):
            for A in combinations(S, i):
                for j in range(1, self.t + 1):
                    for B in combinations(T, j):
                        yield frozenset(A), frozenset(B)

    def would_accept(self, S: Iterable[int], T: Iterable[int]) -> Optional[str]:
        S, T = tuple(sorted(S)), tuple(sorted(T))
        if len(S) != self.s or len(T) != self.t:
            return f"expected sizes ({self.s}, {self.t})"
        if (S, T) in self.edges:
            return "duplicate pair"
        if not is_complete_bipartite_pair(self.host, S, T):
            return "pair is not complete bipartite (or classes intersect)"
        for A, B in self._sub_pairs(S, T):
            cap = self.params.dij_cap(len(A), len(B))
            if self.degrees.get((A, B), 0) + 1 > cap:
                return f"degree cap violated at ({sorted(A)}, {sorted(B)})"
        return None

    def add_pair(self, S: Iterable[int], T: Iterable[int]) -> None:
        reason = self.would_accept(S, T)
        if reason is not None:
            raise KstError(reason)
        S, T = tuple(sorted(S)), tuple(sorted(T))
        self.edges.add((S, T))
        self.event_log.append(("add", (S, T)))
        for A, B in self._sub_pairs(S, T):
            d = self.degrees.get((A, B), 0) + 1
            self.degrees[(A, B)] = d
            if (A, B) not in self.saturated and d >= self.params.saturation_floor(
                len(A), len(B)
            ):
                self.saturated.add((A, B))
                self.event_log.append(("saturate", (A, B)))

    def pair_is_good(self, A: Iterable[int], B: Iterable[int]) -> bool:
        """No saturated sub-pair inside (A, B)."""
        A, B = frozenset(A), frozenset(B)
        return not any(A2 <= A and B2 <= B for A2, B2 in self.saturated)

    def recount(self) -> dict:
        table: dict = {}
        for S, T in self.edges:
            for A, B in self._sub_pairs(S, T):
                table[(A, B)] = table.get((A, B), 0) + 1
        return table

    def audit(self) -> list[str]:
        problems = []
        if self.recount() != self.degrees:
            problems.append("incremental degree table differs from recount")
        for S, T in self.edges:
            if not is_complete_bipartite_pair(self.host, S, T):
                problems.append(f"stored pair ({S}, {T}) is not complete bipartite")
        for (A, B), d in self.degrees.items():
            if d > self.params.dij_cap(len(A), len(B)):
                problems.append(f"cap violated at ({sorted(A)}, {sorted(B)})")
            sat = d >= self.params.saturation_floor(len(A), len(B))
            if sat != ((A, B) in self.saturated):
                problems.append(f"saturated view wrong at ({sorted(A)}, {sorted(B)})")
        return problems

    # -- link sets ---------------------------------------------------------

    def links_xy(self, A: Iterable[int], B: Iterable[int]) -> tuple[set, set]:
        """X: vertices completing a sub-pair of (A, B) to a saturated pair on
        the left; Y: same on the right."""
        A, B = frozenset(A), frozenset(B)
        if not A or not B:
            raise ValueError("A and B must be nonempty")
        X, Y = set(), set()
        for A2, B2 in self.saturated:
            if B2 <= B:
                rest = A2 - A
                # A2 = A' + {u} with A' a nonempty subset of A
                if len(rest) == 1 and (A2 & A):
                    X |= rest
            if A2 <= A:
                rest = B2 - B
                if len(rest) == 1 and (B2 & B):
                    Y |= rest
        return X, Y

    def links_with_caps(
        self, A: Iterable[int], B: Iterable[int]
    ) -> tuple[set, set, float, float]:
        X, Y = self.links_xy(A, B)
        return X, Y, self.params.x_cap(), self.params.y_cap()

    def max_ratio_table(self) -> dict[tuple[int, int], float]:
        out: dict[tuple[int, int], float] = {}
        for (A, B), d in self.degrees.items():
            key = (len(A), len(B))
            ratio = d / self.params.dij_cap(*key)
            out[key] = max(out.get(key, 0.0), ratio)
        return out

    # -- unlabelled degree translation --------------------------------------

    def codegree_translate(self, sigma: Iterable[int]) -> tuple[int, float]:
        """(exact degree of an edge set, translated cap): the number of
        stored pairs whose edge set contains sigma, against the largest
        D^(i,j) with i*j >= |sigma|."""
        sig = frozenset(sigma)
        if not sig:
            raise ValueError("sigma must be nonempty")
        count = 0
        for S, T in self.edges:
            edge_ids = {
                self.host.edge_id(u, v) for u in S for v in T
            }
            if sig <= edge_ids:
                count += 1
        cap = max(
            self.params.dij_cap(i, j)
            for i in range(1, self.s + 1)
            for j in range(1, self.t + 1)
            if i * j >= len(sig)
        )
        return count, cap


# ---------------------------------------------------------------------------
# Finding and building


def find_addable_pair(
    g: Graph,
    h: PairHypergraph,
    strategy: str = "exhaustive",
    pair_cache: Optional[list] = None,
) -> Optional[tuple[tuple, tuple]]:
    if strategy == "exhaustive":
        pairs = (
            pair_cache if pair_cache is not None else enumerate_kst(g, h.s, h.t)
        )
        for S, T in pairs:
            if (S, T) in h.edges:
                continue
            if h.would_accept(S, T) is None:
                return S, T
        return None
    if strategy == "greedy":
        return _greedy_grow_pair(g, h)
    raise ValueError(f"unknown strategy {strategy!r}")


def _greedy_grow_pair(g: Graph, h: PairHypergraph) -> Optional[tuple[tuple, tuple]]:
    """Grow S one neighbour of a seed vertex at a time while avoiding the X
    link, then grow T inside the common neighbourhood avoiding the Y link."""
    s, t = h.s, h.t
    for v in range(g.n):
        for u1 in sorted(g.adjacency[v]):
            S = [u1]
            for _ in range(s - 1):
                X, _y = h.links_xy(S, {v})
                cand = sorted(g.adjacency[v] - set(S) - X - {v})
                nxt = next(
                    (u for u in cand if h.pair_is_good(S + [u], {v})), None
                )
                if nxt is None:
                    break
                S.append(nxt)
            if len(S) != s:
                continue
            common = set(range(g.n))
            for u in S:
                common &= g.adjacency[u]
            common -= set(S)
            T = []
            for _ in range(t):
                if len(T) == 0:
                    pool = sorted(common)
                else:
                    _x, Y = h.links_xy(S, T)
                    pool = sorted(common - set(T) - Y)
                nxt = next(
                    (w for w in pool if h.pair_is_good(S, T + [w])), None
                )
                if nxt is None:
                    break
                T.append(nxt)
            if len(T) != t:
                continue
            if (tuple(sorted(S)), tuple(sorted(T))) in h.edges:
                continue
            if h.would_accept(S, T) is None:
                return tuple(sorted(S)), tuple(sorted(T))
    return None


@dataclass
class KstBuildReport:
    edges: int
    target: int
    target_met: bool
    max_ratio_table: dict
    stalled: bool


def build_good_kst(
    g: Graph,
    params: KstParams,
    target: int,
    strategy: str = "exhaustive",
) -> tuple[PairHypergraph, KstBuildReport]:
    h = PairHypergraph(host=g, params=params)
    cache = enumerate_kst(g, params.s, params.t) if strategy == "exhaustive" else None
    stalled = False
    while h.m < target:
        pair = find_addable_pair(g, h, strategy=strategy, pair_cache=cache)
        if pair is None:
            stalled = True
            break
        h.add_pair(*pair)
    report = KstBuildReport(
        edges=h.m,
        target=target,
        target_met=h.m >= target,
        max_ratio_table=h.max_ratio_table(),
        stalled=stalled,
    )
    return h, report


# ---------------------------------------------------------------------------
# Dump format: "s t count", then lines "S-vertices | T-vertices"


def dump_pairs(h: PairHypergraph) -> str:
    lines = [f"{h.s} {h.t} {h.m}"]
    for S, T in sorted(h.edges):
        lines.append(
            " ".join(str(v) for v in S) + " | " + " ".join(str(v) for v in T)
        )
    return "\n".join(lines) + "\n"
