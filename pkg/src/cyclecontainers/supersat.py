"""Degree-capped cycle hypergraphs on the edge set of a graph: subset degree
tables, saturated sets and their links, and the greedy builder that adds
cycles one at a time while every subset degree stays under its cap.

Two cycle-finding strategies are provided: an exhaustive scan over all
cycles (the oracle path) and the structured search that walks out of a
refined neighbourhood, zig-zags between the top two levels, and returns along
a stored path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .graphs import Graph
from .oracle import enumerate_cycles
from .params import Params
from .paths import PathFamily, build_balanced, refine_balanced, t_of_graph


class SupersatError(ValueError):
    pass


def is_cycle_edge_set(g: Graph, edge_ids: Iterable[int], length: int) -> bool:
    """True iff the edge ids form one simple cycle of exactly `length` edges."""
    ids = list(edge_ids)
    if len(set(ids)) != length:
        return False
    deg: dict[int, list[int]] = {}
    for e in ids:
        u, v = g.edge_pair(e)
        deg.setdefault(u, []).append(v)
        deg.setdefault(v, []).append(u)
    if len(deg) != length or any(len(nb) != 2 for nb in deg.values()):
        return False
    # walk it: a single closed tour must visit all vertices
    start = next(iter(deg))
    prev, cur = None, start
    for _ in range(length):
        a, b = deg[cur]
        nxt = b if a == prev else a
        prev, cur = cur, nxt
    return cur == start


@dataclass
class CycleHypergraph:
    host: Graph
    params: Params
    hyperedges: set = field(default_factory=set)  # sorted 2*ell EdgeId tuples
    degrees: dict = field(default_factory=dict)  # frozenset(sigma) -> count
    saturated: set = field(default_factory=set)  # frozenset sigma in F
    event_log: list = field(default_factory=list)  # (kind, payload) tuples

    @property
    def ell(self) -> int:
        return self.params.ell

    @property
    def m(self) -> int:
        return len(self.hyperedges)

    def degree(self, sigma: Iterable[int]) -> int:
        return self.degrees.get(frozenset(sigma), 0)

    def _subsets(self, cycle: tuple) -> Iterable[frozenset]:
        r = len(cycle)
        for size in range(1, r):
            for sub in combinations(cycle, size):
                yield frozenset(sub)

    def would_accept(self, cycle_edges: Iterable[int]) -> Optional[str]:
        """None if the cycle can be added keeping every degree under its cap;
        otherwise a description of the first violation."""
        cycle = tuple(sorted(cycle_edges))
        if len(cycle) != 2 * self.ell:
            return f"expected {2 * self.ell} edges, got {len(cycle)}"
        if cycle in self.hyperedges:
            return "duplicate cycle"
        if not is_cycle_edge_set(self.host, cycle, 2 * self.ell):
            return "edge set is not a single cycle"
        for sigma in self._subsets(cycle):
            if self.degree(sigma) + 1 > self.params.delta_cap(len(sigma)):
                return f"degree cap violated at sigma={sorted(sigma)}"
        return None

    def add_cycle(self, cycle_edges: Iterable[int]) -> None:
        cycle = tuple(sorted(cycle_edges))
        reason = self.would_accept(cycle)
        if reason is not None:
            raise SupersatError(reason)
        self.hyperedges.add(cycle)
        self.event_log.append(("add", cycle))
        for sigma in self._subsets(cycle):
            d = self.degrees.get(sigma, 0) + 1
            self.degrees[sigma] = d
            if sigma not in self.saturated and d >= self.params.saturation_floor(
                len(sigma)
            ):
                self.saturated.add(sigma)
                self.event_log.append(("saturate", sigma))

    def recount(self) -> dict:
        """Full degree recount from the hyperedges (audit path)."""
        table: dict = {}
        for cycle in self.hyperedges:
            for sigma in self._subsets(cycle):
                table[sigma] = table.get(sigma, 0) + 1
        return table

    def audit(self) -> list[str]:
        """Empty list iff the incremental table, the saturated view, and the
        degree caps all check out."""
        problems = []
        fresh = self.recount()
        if fresh != self.degrees:
            problems.append("incremental degree table differs from recount")
        for cycle in self.hyperedges:
            if not is_cycle_edge_set(self.host, cycle, 2 * self.ell):
                problems.append(f"hyperedge {cycle} is not a cycle")
        for sigma, d in self.degrees.items():
            if d > self.params.delta_cap(len(sigma)):
                problems.append(f"degree cap violated at sigma={sorted(sigma)}")
            saturated = d >= self.params.saturation_floor(len(sigma))
            if saturated != (sigma in self.saturated):
                problems.append(f"saturated view wrong at sigma={sorted(sigma)}")
        return problems

    def max_ratio_by_size(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for sigma, d in self.degrees.items():
            j = len(sigma)
            out[j] = max(out.get(j, 0.0), d / self.params.delta_cap(j))
        return out


class SaturatedFamily:
    """View over a hypergraph's saturated sets, with link queries."""

    def __init__(self, hypergraph: CycleHypergraph):
        self._h = hypergraph

    def members(self) -> frozenset:
        return frozenset(self._h.saturated)

    def is_saturated(self, sigma: Iterable[int]) -> bool:
        return frozenset(sigma) in self._h.saturated

    def contains_saturated(self, edge_ids: Iterable[int]) -> bool:
        s = frozenset(edge_ids)
        return any(sigma <= s for sigma in self._h.saturated)

    def link(self, S: Iterable[int], j: int) -> set:
        """j-sets disjoint from S whose union with some nonempty part of S is
        saturated."""
        s = frozenset(S)
        out = set()
        for sigma in self._h.saturated:
            if sigma & s and len(sigma - s) == j:
                out.add(sigma - s)
        return out

    def link_all(self, S: Iterable[int]) -> set:
        s = frozenset(S)
        out = set()
        for sigma in self._h.saturated:
            if sigma & s:
                rest = sigma - s
                if rest:
                    out.add(rest)
        return out

    def link_with_cap(self, S: Iterable[int], j: int) -> tuple[set, float]:
        s = frozenset(S)
        return self.link(s, j), self._h.params.link_cap(len(s), j)


# ---------------------------------------------------------------------------
# Cycle finding


def _zigzag_schedule(ell: int, t: int) -> list[int]:
    """Level index s(i) for each position i on the outward path: climb to
    level t, then alternate t-1 / t until position 2*ell - t."""
    out = []
    for i in range(2 * ell - t + 1):
        if i <= t:
            out.append(i)
        elif (i - t) % 2 == 1:
            out.append(t - 1)
        else:
            out.append(t)
    return out


@dataclass
class ZigzagSearchDiagnostics:
    t: int = 0
    root: int = -1
    paths_generated: int = 0
    cycles_formed: int = 0
    bad_paths: int = 0  # outward paths with too many forbidden returns
    constants_violated: bool = False
    infeasible: bool = False


def _zigzag_strategy_cycles(
    g: Graph, h: CycleHypergraph, params: Params
) -> tuple[Optional[tuple], ZigzagSearchDiagnostics]:
    diag = ZigzagSearchDiagnostics()
    forbidden = SaturatedFamily(h)
    t, argmin = t_of_graph(g, params)
    if t is None:
        return None, diag
    x = min(argmin)
    diag.t, diag.root = t, x
    balanced = build_balanced(g, x, t, forbidden, params)
    refined = refine_balanced(balanced, params)
    diag.infeasible = refined.infeasible
    if not refined.paths:
        return None, diag
    ell = params.ell
    levels = refined.base

    # bounded neighbour subsets per level, lexicographically first
    def x_of(u: int, i: int) -> list[int]:
        if i < t:
            pool = sorted(g.adjacency[u] & levels.level(i + 1))
            size = params.eps(t) * params.k * params.n ** (1 / ell)
        else:
            pool = sorted(g.adjacency[u] & levels.level(t - 1))
            size = params.eps(t) * params.k ** (ell / (ell - 1))
        if params.relaxed:
            return pool
        return pool[: max(1, math.floor(size))]

    sched = _zigzag_schedule(ell, t)
    q_target = params.eps(t) ** t * params.k ** ((t - 1) * ell / (ell - 1))
    q_count = None if params.relaxed else max(1, math.floor(q_target))
    returns_by_end: dict[int, list] = {}
    for p in refined.paths:
        returns_by_end.setdefault(p[-1], []).append(p)

    found: list[Optional[tuple]] = [None]

    def step2(P: list[int]) -> None:
        diag.paths_generated += 1
        p_edges = frozenset(g.edge_id(P[i], P[i + 1]) for i in range(len(P) - 1))
        pool = sorted(returns_by_end.get(P[-1], ()))
        qp = pool if q_count is None else pool[:q_count]
        obstacles = forbidden.link_all(p_edges)
        interior = set(P[1:-1])
        forbidden_returns = 0
        for q in qp:
            q_edges = refined.path_edge_ids(q)
            if q_edges in obstacles:
                forbidden_returns += 1
            if interior & set(q[1:-1]):
                continue
            if any(ob <= q_edges for ob in obstacles):
                continue
            cycle = tuple(sorted(p_edges | q_edges))
            if len(cycle) != 2 * ell or not is_cycle_edge_set(g, cycle, 2 * ell):
                continue
            diag.cycles_formed += 1
            if h.would_accept(cycle) is None:
                found[0] = cycle
                return
        if q_count is not None and forbidden_returns >= q_count / 4:
            diag.bad_paths += 1
            if diag.bad_paths > params.bad_path_cap(t):
                diag.constants_violated = True

    def step1(prefix: list[int], edges: list[int]) -> None:
        if found[0] is not None:
            return
        i = len(prefix) - 1
        if i == 2 * ell - t:
            step2(prefix)
            return
        link1 = {next(iter(s)) for s in forbidden.link(frozenset(edges), 1)}
        for u in x_of(prefix[-1], sched[i]):
            if found[0] is not None:
                return
            if u in prefix:
                continue
            eid = g.edge_id(prefix[-1], u)
            if eid in link1:
                continue
            if u not in levels.level(sched[i + 1]):
                continue
            step1(prefix + [u], edges + [eid])

    step1([x], [])
    return found[0], diag


def find_addable_cycle(
    g: Graph,
    h: CycleHypergraph,
    strategy: str = "exhaustive",
    cycle_cache: Optional[tuple] = None,
) -> Optional[tuple]:
    """First cycle (canonical order for the exhaustive strategy) whose
    addition keeps every degree under its cap, or None."""
    if strategy == "exhaustive":
        cycles = (
            cycle_cache
            if cycle_cache is not None
            else enumerate_cycles(g, h.ell).cycles
        )
        for cycle in cycles:
            if cycle in h.hyperedges:
                continue
            if h.would_accept(cycle) is None:
                return cycle
        return None
    if strategy == "paper":
        cycle, _ = _zigzag_strategy_cycles(g, h, h.params)
        return cycle
    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Greedy builder


@dataclass
class BuildReport:
    edges: int
    target: int
    target_met: bool
    max_ratio_by_size: dict[int, float]
    rescaled_caps: dict[int, float]
    stalled: bool


def build_good_hypergraph(
    g: Graph,
    params: Params,
    target: int,
    strategy: str = "exhaustive",
) -> tuple[CycleHypergraph, BuildReport]:
    h = CycleHypergraph(host=g, params=params)
    cache = enumerate_cycles(g, params.ell).cycles if strategy == "exhaustive" else None
    stalled = False
    while h.m < target:
        cycle = find_addable_cycle(g, h, strategy=strategy, cycle_cache=cache)
        if cycle is None:
            stalled = True
            break
        h.add_cycle(cycle)
    report = BuildReport(
        edges=h.m,
        target=target,
        target_met=h.m >= target,
        max_ratio_by_size=h.max_ratio_by_size(),
        rescaled_caps={
            j: params.delta_cap_rescaled(j) for j in range(1, 2 * params.ell)
        },
        stalled=stalled,
    )
    return h, report


# ---------------------------------------------------------------------------
# Analytic monitors


def claim_path_count_bound(params: Params, t: int, j: int) -> float:
    return params.m_of_j(t, j)


def cycle_collection_target(params: Params) -> float:
    return params.cycle_target()


def mj_inequality_holds(params: Params, t: int, j: int) -> bool:
    """delta * m(j) * k^(j*ell/(ell-1)) stays under the outward-path count
    bound."""
    ell = params.ell
    lhs = params.delta * params.m_of_j(t, j) * params.k ** (j * ell / (ell - 1))
    rhs = (params.eps(t) * params.k * params.n ** (1 / ell)) ** (ell - 1) * (
        params.eps(t) * params.k ** (ell / (ell - 1))
    ) ** (ell - t)
    return lhs <= rhs


# ---------------------------------------------------------------------------
# Dump format: header "n ell e(H)", one hyperedge per line


def dump_hypergraph(h: CycleHypergraph) -> str:
    lines = [f"{h.host.n} {h.ell} {h.m}"]
    for cycle in sorted(h.hyperedges):
        lines.append(" ".join(str(e) for e in cycle))
    return "\n".join(lines) + "\n"


def read_hypergraph(text: str, host: Graph, params: Params) -> CycleHypergraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n, ell, count = (int(x) for x in lines[0].split())
    if n != host.n or ell != params.ell:
        raise SupersatError("dump header does not match host graph / params")
    if len(lines) - 1 != count:
        raise SupersatError("hyperedge count mismatch")
    h = CycleHypergraph(host=host, params=params)
    for ln in lines[1:]:
        h.add_cycle(int(x) for x in ln.split())
    return h
