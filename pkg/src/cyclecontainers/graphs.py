"""Immutable simple graphs with canonical integer edge ids, plus seeded generators."""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class RngSpec:
    """Deterministic, splittable randomness source.

    Identical (seed, label) yields an identical draw sequence on every
    platform: the pair is hashed to a 64-bit integer that seeds a
    Mersenne-Twister stream.
    """

    seed: int
    label: str = ""

    def stream(self) -> random.Random:
        h = hashlib.blake2b(digest_size=8)
        h.update(str(self.seed).encode())
        h.update(b"\x00")
        h.update(self.label.encode())
        return random.Random(int.from_bytes(h.digest(), "big"))

    def split(self, label: str) -> "RngSpec":
        return RngSpec(self.seed, f"{self.label}/{label}" if self.label else label)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Edges are stored sorted lexicographically as (u, v) with u < v; the
    position of an edge in `edges` is its EdgeId.  Adjacency sets mirror the
    edge list exactly.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[frozenset[int], ...] = field(repr=False)
    edge_index: dict[tuple[int, int], int] = field(repr=False, compare=False, hash=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def edge_pair(self, eid: int) -> tuple[int, int]:
        return self.edges[eid]

    def consistent(self) -> bool:
        """Cross-check adjacency against the edge list."""
        from_adj = set()
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u not in self.adjacency[v]:
                    return False
                if u < v:
                    from_adj.add((u, v))
        return from_adj == set(self.edges) and list(self.edges) == sorted(self.edges)

    def subgraph_of_edges(self, edge_ids: Iterable[int]) -> "Graph":
        """Spanning subgraph on the same vertex set; EdgeIds are re-canonical."""
        pairs = [self.edges[e] for e in edge_ids]
        return build_graph(self.n, pairs)


def build_graph(n: int, edge_pairs: Iterable[tuple[int, int]]) -> Graph:
    """Canonicalize an edge list into a Graph, rejecting malformed input."""
    seen: set[tuple[int, int]] = set()
    canon: list[tuple[int, int]] = []
    for pair in edge_pairs:
        u, v = pair
        if u == v:
            raise GraphError(f"self-loop at vertex {u}: {pair}")
        if u > v:
            u, v = v, u
        if not (0 <= u < v < n):
            raise GraphError(f"vertex out of range for n={n}: {pair}")
        if (u, v) in seen:
            raise GraphError(f"duplicate edge: {pair}")
        seen.add((u, v))
        canon.append((u, v))
    canon.sort()
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in canon:
        adj[u].add(v)
        adj[v].add(u)
    edges = tuple(canon)
    return Graph(
        n=n,
        edges=edges,
        adjacency=tuple(frozenset(a) for a in adj),
        edge_index={e: i for i, e in enumerate(edges)},
    )


def all_pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def complete(n: int) -> Graph:
    return build_graph(n, all_pairs(n))


def complete_bipartite(s: int, t: int) -> Graph:
    """Parts {0..s-1} and {s..s+t-1}."""
    return build_graph(s + t, [(u, s + v) for u in range(s) for v in range(t)])


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise GraphError(f"cycle needs at least 3 vertices, got {m}")
    return build_graph(m, [(i, (i + 1) % m) for i in range(m)])


def gnp(n: int, p: float, rng: RngSpec) -> Graph:
    """Each pair included independently with probability p, drawn in
    lexicographic pair order from the rng stream."""
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"p out of range: {p}")
    stream = rng.stream()
    pairs = [pair for pair in all_pairs(n) if stream.random() < p]
    return build_graph(n, pairs)


def gnp_coupled(n: int, p: float, rng: RngSpec) -> Graph:
    """Shared-randomness G(n,p): one uniform draw per pair, edge iff draw < p.

    For fixed rng, the edge sets are nested across p, so monotone statistics
    of the sample are exactly monotone in p.
    """
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"p out of range: {p}")
    stream = rng.stream()
    pairs = []
    for pair in all_pairs(n):
        if stream.random() < p:
            pairs.append(pair)
    return build_graph(n, pairs)


def gnm(n: int, m: int, rng: RngSpec) -> Graph:
    total = n * (n - 1) // 2
    if m > total:
        raise GraphError(f"m={m} exceeds C({n},2)={total}")
    stream = rng.stream()
    chosen = stream.sample(range(total), m)
    pairs = all_pairs(n)
    return build_graph(n, [pairs[i] for i in chosen])


@dataclass(frozen=True)
class PruneResult:
    graph: Graph
    kept: tuple[int, ...]  # new label i corresponds to original vertex kept[i]


def min_degree_prune(g: Graph, d: float) -> PruneResult:
    """Repeatedly delete vertices of degree < d; relabel survivors densely."""
    if d < 0:
        raise GraphError(f"threshold must be nonnegative, got {d}")
    alive = set(range(g.n))
    deg = {v: g.degree(v) for v in alive}
    queue = [v for v in alive if deg[v] < d]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in g.adjacency[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] < d:
                    queue.append(u)
    kept = tuple(sorted(alive))
    relabel = {old: new for new, old in enumerate(kept)}
    pairs = [
        (relabel[u], relabel[v])
        for u, v in g.edges
        if u in alive and v in alive
    ]
    return PruneResult(build_graph(len(kept), pairs), kept)


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty edge-list input")
    header = lines[0].split()
    if len(header) != 2:
        raise GraphError(f"bad header: {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    if len(lines) - 1 != m:
        raise GraphError(f"header declares {m} edges, found {len(lines) - 1}")
    pairs = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise GraphError(f"edge not in u<v form: {ln!r}")
        pairs.append((u, v))
    if pairs != sorted(pairs):
        raise GraphError("edge list not lexicographically sorted")
    return build_graph(n, pairs)


def k_of_graph(g: Graph, ell: int) -> float:
    """Density parameter from e(G) = k * n^(1+1/ell); real-valued, never rounded."""
    if g.n == 0:
        return 0.0
    return g.m / g.n ** (1.0 + 1.0 / ell)
