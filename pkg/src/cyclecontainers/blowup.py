"""Lower-bound constructions: blow-ups that replace vertices by blocks and
edges by matchings between blocks, and the random-graph-intersected variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Optional, Sequence

from .graphs import Graph, RngSpec, build_graph, gnp
from .oracle import enumerate_cycles_of_length, girth_at_most


def count_matchings(a: int, b: int) -> int:
    """Matchings (including the empty one) in the complete bipartite graph
    with sides a and b: choose k left ends, k right ends, and a bijection."""
    if a < 0 or b < 0:
        raise ValueError("sides must be nonnegative")
    return sum(
        math.comb(a, k) * math.comb(b, k) * math.factorial(k)
        for k in range(min(a, b) + 1)
    )


def enumerate_matchings(a: int, b: int) -> list[tuple[tuple[int, int], ...]]:
    """All matchings of the complete bipartite graph with sides a and b, as
    sorted tuples of (left, right) pairs, ordered by size then
    lexicographically."""
    out: list[tuple[tuple[int, int], ...]] = [()]
    for k in range(1, min(a, b) + 1):
        found = []
        for left in combinations(range(a), k):
            for right_perm in permutations(range(b), k):
                m = tuple(sorted(zip(left, right_perm)))
                found.append(m)
        out.extend(sorted(set(found)))
    # sort by (size, lexicographic edge list); sizes are already grouped
    return out


def brute_count_matchings(a: int, b: int) -> int:
    """Independent cross-check of count_matchings by explicit enumeration."""
    if max(a, b) > 5:
        raise ValueError("brute-force check capped at sides 5")
    return len(enumerate_matchings(a, b))


@dataclass(frozen=True)
class BlowupSpec:
    base: Graph
    b: int  # block size

    def __post_init__(self):
        if self.b < 1:
            raise ValueError("block size must be >= 1")

    @property
    def choices_per_edge(self) -> int:
        return count_matchings(self.b, self.b)

    def log2_family_size(self) -> float:
        return self.base.m * math.log2(self.choices_per_edge)


def blow_up(spec: BlowupSpec, choices: Sequence[int]) -> Graph:
    """Blow up the base: vertex i becomes block {b*i, ..., b*i + b - 1};
    base edge e becomes the matching with the given canonical index."""
    base, b = spec.base, spec.b
    if len(choices) != base.m:
        raise ValueError(f"need one matching index per base edge ({base.m})")
    table = enumerate_matchings(b, b)
    pairs = []
    for eid, idx in enumerate(choices):
        if not 0 <= idx < len(table):
            raise ValueError(f"matching index {idx} out of range for edge {eid}")
        u, v = base.edges[eid]
        for p, q in table[idx]:
            pairs.append((b * u + p, b * v + q))
    return build_graph(base.n * b, pairs)


def sample_blowup(spec: BlowupSpec, rng: RngSpec) -> Graph:
    stream = rng.stream()
    count = spec.choices_per_edge
    return blow_up(spec, [stream.randrange(count) for _ in range(spec.base.m)])


def verify_family_free(g: Graph, lengths: Sequence[int]) -> tuple[bool, Optional[tuple]]:
    """Exhaustively search for a cycle whose length is in the family;
    returns (free, witness edge tuple or None)."""
    for length in sorted(set(lengths)):
        if length < 3:
            raise ValueError(f"cycle length must be >= 3, got {length}")
        cycles, _ = enumerate_cycles_of_length(g, length, cap=1)
        if cycles:
            return False, cycles[0]
    return True, None


def forbidden_lengths(ell: int) -> list[int]:
    """The family a blow-up base must avoid so its blow-ups have no short
    even cycle: all lengths up to ell, plus 2*ell."""
    return list(range(3, ell + 1)) + [2 * ell]


@dataclass
class IntersectReport:
    graph: Graph
    host: Graph  # the sampled random graph
    block_size: int
    edge_count: int
    target: float  # eps^2 * p^(1/ell) * n^(1+1/ell)


def random_intersect_blowup(
    base: Graph, p: float, eps: float, ell: int, rng: RngSpec
) -> IntersectReport:
    """Blow each base vertex up to a block of size ~eps/p, intersect with a
    sampled random graph, and keep a greedy maximal matching inside every
    block pair corresponding to a base edge."""
    if not 0 < p <= 1:
        raise ValueError("p must be in (0, 1]")
    short = girth_at_most(base, 2 * ell)
    if short is not None:
        raise ValueError(f"base has a cycle of length {short} <= {2 * ell}")
    a = max(1, round(eps / p))
    n = base.n * a
    host = gnp(n, p, rng)
    block = lambda v: range(a * v, a * (v + 1))
    kept = []
    for u, v in base.edges:
        used: set[int] = set()
        for x in block(u):
            for y in block(v):
                lo, hi = min(x, y), max(x, y)
                if host.has_edge(lo, hi) and x not in used and y not in used:
                    kept.append((lo, hi))
                    used.add(x)
                    used.add(y)
    g = build_graph(n, sorted(set(kept)))
    free, witness = verify_family_free(g, [2 * ell])
    if not free:
        raise AssertionError(f"intersected blow-up contains a short cycle: {witness}")
    return IntersectReport(
        graph=g,
        host=host,
        block_size=a,
        edge_count=g.m,
        target=eps ** 2 * p ** (1 / ell) * n ** (1 + 1 / ell),
    )
