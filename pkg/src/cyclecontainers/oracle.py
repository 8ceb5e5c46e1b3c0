"""Brute-force ground truth: cycle enumeration, free-graph enumeration, and
exact maximum cycle-free subgraphs.

Everything here is an oracle: simple, exhaustive, and independent of the
production machinery it is used to verify.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .graphs import Graph, build_graph, all_pairs


class BudgetExceeded(RuntimeError):
    """Raised when an exact computation would exceed its resource budget."""


@dataclass(frozen=True)
class CycleSet:
    ell: int
    cycles: tuple[tuple[int, ...], ...]  # each a sorted tuple of 2*ell EdgeIds
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.cycles)

    def __contains__(self, edge_ids) -> bool:
        return tuple(sorted(edge_ids)) in self._index

    @property
    def _index(self) -> frozenset:
        # computed lazily but cached on the instance
        idx = self.__dict__.get("_index_cache")
        if idx is None:
            idx = frozenset(self.cycles)
            object.__setattr__(self, "_index_cache", idx)
        return idx


def _vertex_cycles(g: Graph, length: int, cap: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Yield each simple cycle of exactly `length` vertices once.

    Canonical form: rooted at the minimum-labeled vertex, with the second
    vertex smaller than the last (direction tie-break), so no dedup table is
    needed.
    """
    count = 0
    for root in range(g.n):
        # DFS over paths (root, v1, ..., v_{length-1}) with all vi > root
        path = [root]
        on_path = {root}

        def extend() -> Iterator[tuple[int, ...]]:
            depth = len(path)
            if depth == length:
                last = path[-1]
                if root in g.adjacency[last] and path[1] < last:
                    yield tuple(path)
                return
            for w in sorted(g.adjacency[path[-1]]):
                if w <= root or w in on_path:
                    continue
                path.append(w)
                on_path.add(w)
                yield from extend()
                path.pop()
                on_path.discard(w)

        for cyc in extend():
            yield cyc
            count += 1
            if cap is not None and count >= cap:
                return


def cycle_edge_ids(g: Graph, vcycle: Sequence[int]) -> tuple[int, ...]:
    k = len(vcycle)
    return tuple(sorted(g.edge_id(vcycle[i], vcycle[(i + 1) % k]) for i in range(k)))


def enumerate_cycles_of_length(
    g: Graph, length: int, cap: Optional[int] = None
) -> tuple[list[tuple[int, ...]], bool]:
    """All simple cycles of exactly `length` edges, as sorted EdgeId tuples in
    lexicographic order.  Returns (cycles, truncated)."""
    if length < 3:
        raise ValueError(f"cycle length must be >= 3, got {length}")
    found = []
    truncated = False
    gen = _vertex_cycles(g, length, cap)
    for vcyc in gen:
        found.append(cycle_edge_ids(g, vcyc))
    if cap is not None and len(found) >= cap:
        # check whether anything was left ungenerated
        probe = _vertex_cycles(g, length, cap + 1)
        extra = sum(1 for _ in probe)
        truncated = extra > cap
    found.sort()
    return found, truncated


def enumerate_cycles(g: Graph, ell: int, cap: Optional[int] = None) -> CycleSet:
    """Every 2*ell-cycle of g, once each, in canonical order."""
    if ell < 2:
        raise ValueError(f"ell must be >= 2, got {ell}")
    cycles, truncated = enumerate_cycles_of_length(g, 2 * ell, cap)
    return CycleSet(ell=ell, cycles=tuple(cycles), truncated=truncated)


def count_cycles_through(g: Graph, ell: int, sigma: Sequence[int]) -> int:
    """Number of distinct 2*ell-cycles whose edge set contains sigma."""
    sig = set(sigma)
    if not sig:
        raise ValueError("sigma must be nonempty")
    for e in sig:
        if not 0 <= e < g.m:
            raise ValueError(f"invalid EdgeId {e}")
    return sum(1 for c in enumerate_cycles(g, ell).cycles if sig.issubset(c))


def count_4cycles(g: Graph) -> int:
    """Exact 4-cycle count via codegrees: each C4 is counted once per diagonal
    pair, i.e. twice in sum over pairs of C(codeg, 2)."""
    total = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            c = len(g.adjacency[u] & g.adjacency[v])
            total += c * (c - 1) // 2
    return total // 2


def has_cycle_of_length(g: Graph, length: int) -> bool:
    for _ in _vertex_cycles(g, length, cap=1):
        return True
    return False


def is_free(g: Graph, ell: int) -> bool:
    """True iff g contains no 2*ell-cycle."""
    return not has_cycle_of_length(g, 2 * ell)


def girth_at_most(g: Graph, bound: int) -> Optional[int]:
    """Smallest cycle length <= bound, or None."""
    for length in range(3, bound + 1):
        if has_cycle_of_length(g, length):
            return length
    return None


# ---------------------------------------------------------------------------
# Exhaustive free-graph enumeration over labeled graphs on [n]

FREE_GRAPH_VERTEX_CAP = 7


def complete_graph_cycle_masks(n: int, ell: int) -> list[int]:
    """Edge-set bitmasks (over lexicographic pair ids of K_n) of every
    2*ell-cycle of K_n."""
    from .graphs import complete

    kn = complete(n)
    masks = []
    for cyc in enumerate_cycles(kn, ell).cycles:
        mask = 0
        for e in cyc:
            mask |= 1 << e
        masks.append(mask)
    return masks


def free_graph_masks(n: int, ell: int, cap: int = FREE_GRAPH_VERTEX_CAP) -> Iterator[int]:
    """Yield the edge bitmask (lexicographic pair ids) of every labeled
    C_{2*ell}-free graph on [n], in increasing mask order."""
    if n > cap:
        raise BudgetExceeded(f"n={n} exceeds free-graph enumeration cap {cap}")
    m = n * (n - 1) // 2
    cycle_masks = complete_graph_cycle_masks(n, ell)
    for mask in range(1 << m):
        if all(mask & c != c for c in cycle_masks):
            yield mask


def mask_to_graph(n: int, mask: int) -> Graph:
    pairs = all_pairs(n)
    return build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def enumerate_free_graphs(
    n: int, ell: int, cap: int = FREE_GRAPH_VERTEX_CAP
) -> Iterator[Graph]:
    for mask in free_graph_masks(n, ell, cap):
        yield mask_to_graph(n, mask)


def count_free_graphs(n: int, ell: int, cap: int = FREE_GRAPH_VERTEX_CAP) -> int:
    return sum(1 for _ in free_graph_masks(n, ell, cap))


# ---------------------------------------------------------------------------
# Maximum C_{2*ell}-free subgraph


@dataclass(frozen=True)
class FreeSubgraphResult:
    size: int
    witness: Graph
    exact: bool


def greedy_free_subgraph(g: Graph, ell: int) -> FreeSubgraphResult:
    """Add edges in lexicographic order, skipping any that closes a 2*ell-cycle."""
    length = 2 * ell
    adj: list[set[int]] = [set() for _ in range(g.n)]
    chosen: list[tuple[int, int]] = []

    def closes_cycle(u: int, v: int) -> bool:
        # is there a simple path of length-1 edges ... of exactly length-1
        # between u and v using current edges?
        target_len = length - 1  # edges on the path

        def dfs(cur: int, used: set[int], depth: int) -> bool:
            if depth == target_len:
                return cur == v
            for w in adj[cur]:
                if w not in used and (w != v or depth + 1 == target_len):
                    used.add(w)
                    if dfs(w, used, depth + 1):
                        used.discard(w)
                        return True
                    used.discard(w)
            return False

        return dfs(u, {u}, 0)

    for u, v in g.edges:
        if not closes_cycle(u, v):
            chosen.append((u, v))
            adj[u].add(v)
            adj[v].add(u)
    witness = build_graph(g.n, chosen)
    assert is_free(witness, ell)
    return FreeSubgraphResult(size=len(chosen), witness=witness, exact=False)


def max_free_subgraph(
    g: Graph,
    ell: int,
    mode: str = "exact",
    max_nodes: int = 2_000_000,
    cycle_cap: int = 200_000,
) -> FreeSubgraphResult:
    """Maximum number of edges of a C_{2*ell}-free subgraph.

    Exact mode solves the minimum edge hitting set over all 2*ell-cycles of g
    by branch and bound, branching on a most-constrained uncovered cycle; it
    raises BudgetExceeded rather than ever returning a wrong answer.
    """
    if mode == "greedy":
        return greedy_free_subgraph(g, ell)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    cs = enumerate_cycles(g, ell, cap=cycle_cap)
    if cs.truncated:
        raise BudgetExceeded(f"more than {cycle_cap} cycles")
    cycles = [frozenset(c) for c in cs.cycles]
    if not cycles:
        return FreeSubgraphResult(size=g.m, witness=g, exact=True)

    greedy = greedy_free_subgraph(g, ell)
    best_deletions = g.m - greedy.size  # known-achievable hitting set size
    best_hit: Optional[frozenset[int]] = frozenset(
        e for e in range(g.m) if g.edges[e] not in set(greedy.witness.edges)
    )
    nodes = 0

    def lower_bound(uncovered: list[frozenset[int]], banned: frozenset[int]) -> int:
        # greedy packing of edge-disjoint uncovered cycles
        used: set[int] = set()
        lb = 0
        for c in uncovered:
            avail = c - banned
            if avail and not (avail & used):
                used |= avail
                lb += 1
        return lb

    def solve(deleted: frozenset[int], idx_uncovered: list[frozenset[int]]) -> None:
        nonlocal best_deletions, best_hit, nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"branch-and-bound exceeded {max_nodes} nodes")
        uncovered = [c for c in idx_uncovered if not (c & deleted)]
        if not uncovered:
            if len(deleted) < best_deletions:
                best_deletions = len(deleted)
                best_hit = deleted
            return
        if len(deleted) + lower_bound(uncovered, deleted) >= best_deletions:
            return
        # most constrained cycle: fewest deletable edges
        pivot = min(uncovered, key=lambda c: (len(c), sorted(c)))
        for e in sorted(pivot):
            solve(deleted | {e}, uncovered)

    solve(frozenset(), cycles)
    assert best_hit is not None
    witness = g.subgraph_of_edges(e for e in range(g.m) if e not in best_hit)
    assert is_free(witness, ell)
    return FreeSubgraphResult(size=g.m - best_deletions, witness=witness, exact=True)
