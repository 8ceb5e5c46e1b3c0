"""Container machinery: the co-degree function, a deterministic fingerprinted
container algorithm for uniform hypergraphs, the graph-level container step,
its iteration to a rooted tree, and the coloured-graph encoding.

The container algorithm ("scythe") scans hypergraph vertices in
current-max-degree order.  A scanned vertex outside the queried independent
set is deleted; one inside it is appended to the fingerprint T.  Scanning
stops once the surviving hyperedge count drops to (1-delta) of the original,
the fingerprint budget is exhausted, or no scannable vertex lies in a
surviving hyperedge.  Only confirmed non-members are ever deleted, so the
container (the undeleted vertices) covers the independent set by
construction, and the whole scan replays from T alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Optional

from .graphs import Graph, build_graph, complete
from .oracle import BudgetExceeded
from .params import Params
from .supersat import CycleHypergraph, build_good_hypergraph


@dataclass(frozen=True)
class UniformHypergraph:
    r: int
    N: int
    hyperedges: tuple  # sorted r-tuples of ints < N

    def __post_init__(self):
        seen = set()
        for e in self.hyperedges:
            if len(e) != self.r or len(set(e)) != self.r:
                raise ValueError(f"hyperedge {e} is not a {self.r}-set")
            if tuple(sorted(e)) != tuple(e):
                raise ValueError(f"hyperedge {e} is not sorted")
            if any(not 0 <= v < self.N for v in e):
                raise ValueError(f"hyperedge {e} out of range")
            if e in seen:
                raise ValueError(f"duplicate hyperedge {e}")
            seen.add(e)

    @property
    def m(self) -> int:
        return len(self.hyperedges)


def from_cycle_hypergraph(h: CycleHypergraph) -> UniformHypergraph:
    return UniformHypergraph(
        r=2 * h.ell, N=h.host.m, hyperedges=tuple(sorted(h.hyperedges))
    )


# ---------------------------------------------------------------------------
# Co-degree function


def codegree(h: UniformHypergraph, tau: float) -> float:
    """Weighted sum over j = 2..r of tau^-(j-1) times the per-vertex maximum
    degree of a j-set through that vertex, normalized by e(H)."""
    if h.m == 0:
        raise ValueError("co-degree function undefined for an empty hypergraph")
    if tau <= 0:
        raise ValueError("tau must be positive")
    deg: dict = {}
    for e in h.hyperedges:
        for j in range(2, h.r + 1):
            for sub in combinations(e, j):
                deg[sub] = deg.get(sub, 0) + 1
    best: dict = {}  # (v, j) -> max degree
    for sub, d in deg.items():
        j = len(sub)
        for v in sub:
            key = (v, j)
            if d > best.get(key, 0):
                best[key] = d
    total = 0.0
    for j in range(2, h.r + 1):
        s = sum(best.get((v, j), 0) for v in range(h.N))
        total += tau ** (-(j - 1)) * s
    return total / h.m


# ---------------------------------------------------------------------------
# The scythe


@dataclass(frozen=True)
class ScytheResult:
    fingerprint: tuple  # member-scanned vertices, in scan order
    container: frozenset
    surviving_edges: int  # hyperedges inside the container at stop time


def _scythe(
    h: UniformHypergraph,
    tau: float,
    delta: float,
    member: Callable[[int], bool],
    budget: Optional[int] = None,
) -> ScytheResult:
    if budget is None:
        budget = math.floor(tau * h.N / delta)
    threshold = (1 - delta) * h.m
    alive = set(range(h.N))
    active = [set(e) for e in h.hyperedges]
    scanned: set = set()
    T: list[int] = []
    while True:
        if len(active) <= threshold or len(T) >= budget:
            break
        degree: dict[int, int] = {}
        for e in active:
            for v in e:
                if v not in scanned:
                    degree[v] = degree.get(v, 0) + 1
        if not degree:
            break  # no scannable vertex can still change the edge count
        v = min(degree, key=lambda u: (-degree[u], u))
        scanned.add(v)
        if member(v):
            T.append(v)
        else:
            alive.discard(v)
            active = [e for e in active if v not in e]
    return ScytheResult(
        fingerprint=tuple(T), container=frozenset(alive), surviving_edges=len(active)
    )


def container_for(
    h: UniformHypergraph,
    tau: float,
    delta: float,
    independent: Iterable[int],
    budget: Optional[int] = None,
) -> ScytheResult:
    s = set(independent)
    return _scythe(h, tau, delta, lambda v: v in s, budget=budget)


def replay(
    h: UniformHypergraph,
    tau: float,
    delta: float,
    fingerprint: Iterable[int],
    budget: Optional[int] = None,
) -> ScytheResult:
    """The container is a pure function of the fingerprint: rerunning the
    scan with membership given by T reproduces it."""
    t = set(fingerprint)
    return _scythe(h, tau, delta, lambda v: v in t, budget=budget)


@dataclass
class ContainerRun:
    tau: float
    delta: float
    budget: int
    total_edges: int
    containers: tuple  # distinct containers (frozensets), sorted
    fingerprints: dict  # fingerprint tuple -> index into containers
    edges_inside: tuple  # e(H[C]) per container
    reduction_violations: tuple  # indices where e(H[C]) > (1-delta) e(H)


def edges_inside(h: UniformHypergraph, container: frozenset) -> int:
    return sum(1 for e in h.hyperedges if all(v in container for v in e))


def build_containers(
    h: UniformHypergraph,
    tau: float,
    delta: float,
    budget: Optional[int] = None,
    max_nodes: int = 2_000_000,
) -> ContainerRun:
    """Materialize every container by exploring both answers at each scan
    step, restricted to fingerprints that stay independent in h."""
    if h.m == 0:
        raise ValueError("need at least one hyperedge")
    if budget is None:
        budget = math.floor(tau * h.N / delta)
    threshold = (1 - delta) * h.m
    edge_sets = [frozenset(e) for e in h.hyperedges]

    results: dict[tuple, frozenset] = {}
    nodes = 0

    def explore(alive: frozenset, active: tuple, scanned: frozenset, T: tuple) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"container exploration exceeded {max_nodes} nodes")
        while True:
            if len(active) <= threshold or len(T) >= budget:
                results[T] = alive
                return
            degree: dict[int, int] = {}
            for e in active:
                for v in e:
                    if v not in scanned:
                        degree[v] = degree.get(v, 0) + 1
            if not degree:
                results[T] = alive
                return
            v = min(degree, key=lambda u: (-degree[u], u))
            scanned = scanned | {v}
            # member branch, only while T stays independent
            t_new = set(T) | {v}
            if not any(e <= t_new for e in edge_sets):
                explore(alive, active, scanned, T + (v,))
            # non-member branch continues in this frame
            alive = alive - {v}
            active = tuple(e for e in active if v not in e)
            T = T  # unchanged

    explore(
        frozenset(range(h.N)),
        tuple(frozenset(e) for e in h.hyperedges),
        frozenset(),
        (),
    )

    containers = tuple(sorted(set(results.values()), key=sorted))
    index = {c: i for i, c in enumerate(containers)}
    fingerprints = {t: index[c] for t, c in results.items()}
    inside = tuple(edges_inside(h, c) for c in containers)
    violations = tuple(i for i, e in enumerate(inside) if e > threshold)
    return ContainerRun(
        tau=tau,
        delta=delta,
        budget=budget,
        total_edges=h.m,
        containers=containers,
        fingerprints=fingerprints,
        edges_inside=inside,
        reduction_violations=violations,
    )


# ---------------------------------------------------------------------------
# Graph-level container step

# vertices of the hypergraph are EdgeIds of the host graph; containers and
# fingerprints are translated back to vertex-pair edge sets so they stay
# comparable across refinement rounds


@dataclass
class GraphStep:
    host: Graph
    no_cycles: bool
    hypergraph: Optional[UniformHypergraph]
    tau: float
    delta: float
    containers: tuple  # Graphs on the same vertex count
    run: Optional[ContainerRun]


def _pairs_of(g: Graph, edge_ids: Iterable[int]) -> frozenset:
    return frozenset(g.edges[e] for e in edge_ids)


def build_node_hypergraph(
    g: Graph, params: Params, target: Optional[int] = None
) -> CycleHypergraph:
    if target is None:
        target = math.ceil(
            params.delta * params.k ** (2 * params.ell) * params.n ** 2
        )
    h, _ = build_good_hypergraph(g, params, target=target, strategy="exhaustive")
    return h


def graph_container_step(
    g: Graph,
    params: Params,
    container_delta: Optional[float] = None,
    tau: Optional[float] = None,
    supersat_target: Optional[int] = None,
) -> GraphStep:
    if g.m == 0:
        raise ValueError("need at least one edge")
    delta = params.delta if container_delta is None else container_delta
    if tau is None:
        tau = params.tau()[0]
    cyc = build_node_hypergraph(g, params, target=supersat_target)
    if cyc.m == 0:
        return GraphStep(
            host=g,
            no_cycles=True,
            hypergraph=None,
            tau=tau,
            delta=delta,
            containers=(g,),
            run=None,
        )
    uh = from_cycle_hypergraph(cyc)
    run = build_containers(uh, tau, delta)
    subgraphs = tuple(
        g.subgraph_of_edges(sorted(c)) for c in run.containers
    )
    return GraphStep(
        host=g,
        no_cycles=False,
        hypergraph=uh,
        tau=tau,
        delta=delta,
        containers=subgraphs,
        run=run,
    )


def step_container_for(
    step: GraphStep, free_subgraph: Graph
) -> tuple[frozenset, Graph]:
    """Route a cycle-free subgraph through a computed step: returns the
    fingerprint (as vertex pairs) and the container subgraph covering it."""
    g = step.host
    if step.no_cycles:
        return frozenset(), g
    member_ids = {
        g.edge_index[p] for p in free_subgraph.edges if p in g.edge_index
    }
    res = container_for(step.hypergraph, step.tau, step.delta, member_ids)
    child = g.subgraph_of_edges(sorted(res.container))
    return _pairs_of(g, res.fingerprint), child


# ---------------------------------------------------------------------------
# Iteration to a rooted tree


@dataclass
class TreeNode:
    id: int
    parent: Optional[int]
    depth: int
    graph: Graph
    leaf: bool
    stalled: bool  # container equal to its parent; not expanded further
    children: list = field(default_factory=list)


@dataclass
class ContainerTree:
    n: int
    k_target: float
    nodes: list
    step_cache: dict  # edge set -> GraphStep

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def leaves(self) -> list:
        return [nd for nd in self.nodes if nd.leaf]

    def max_leaf_edges(self) -> int:
        return max((nd.graph.m for nd in self.leaves()), default=0)

    def cover_path(self, free_subgraph: Graph) -> list:
        """Node ids from the root down to a leaf whose graph contains the
        given cycle-free graph; verified at every level."""
        node = self.root
        path = [node.id]
        edges = set(free_subgraph.edges)
        while True:
            if not edges <= set(node.graph.edges):
                raise AssertionError(f"coverage lost at node {node.id}")
            if node.leaf:
                return path
            step = self.step_cache[frozenset(node.graph.edges)]
            _, child = step_container_for(step, free_subgraph)
            child_edges = frozenset(child.edges)
            for cid in node.children:
                if frozenset(self.nodes[cid].graph.edges) == child_edges:
                    node = self.nodes[cid]
                    break
            else:
                raise AssertionError(f"routed container missing at node {node.id}")
            path.append(node.id)


def k_schedule(i: int, n: int, ell: int, k_target: float, eps_step: float) -> float:
    return max((1 - eps_step) ** i * n ** (1 - 1 / ell), k_target)


def iterate_containers(
    n: int,
    ell: int,
    k_target: float,
    params: Params,
    container_delta: Optional[float] = None,
    tau: Optional[float] = None,
    eps_step: Optional[float] = None,
    max_depth: Optional[int] = None,
) -> ContainerTree:
    """Refine K_n by repeated container steps until every node's edge count
    is under the depth-dependent threshold."""
    if max_depth is None:
        max_depth = math.ceil(10 * math.log(max(n, 2)))
    if eps_step is None:
        eps_step = container_delta if container_delta is not None else params.delta
    root_graph = complete(n)
    nodes = [TreeNode(id=0, parent=None, depth=0, graph=root_graph, leaf=False, stalled=False)]
    step_cache: dict = {}
    queue = [0]
    while queue:
        nid = queue.pop(0)
        node = nodes[nid]
        g = node.graph
        threshold = k_schedule(node.depth + 1, n, ell, k_target, eps_step) * n ** (
            1 + 1 / ell
        )
        if g.m <= threshold or g.m == 0:
            node.leaf = True
            continue
        if node.depth >= max_depth:
            raise BudgetExceeded(f"container tree exceeded depth {max_depth}")
        key = frozenset(g.edges)
        if key not in step_cache:
            step_cache[key] = graph_container_step(
                g,
                params.with_instance(k=g.m / n ** (1 + 1 / ell), n=n),
                container_delta=container_delta,
                tau=tau,
            )
        step = step_cache[key]
        if step.no_cycles:
            node.leaf = True
            node.stalled = True
            continue
        for child in step.containers:
            cid = len(nodes)
            stalled = child.m == g.m
            child_node = TreeNode(
                id=cid,
                parent=nid,
                depth=node.depth + 1,
                graph=child,
                leaf=stalled,
                stalled=stalled,
            )
            nodes.append(child_node)
            node.children.append(cid)
            if not stalled:
                queue.append(cid)
    return ContainerTree(n=n, k_target=k_target, nodes=nodes, step_cache=step_cache)


# ---------------------------------------------------------------------------
# Coloured-graph encoding


@dataclass
class ColouredEncoding:
    fingerprints: tuple  # frozensets of vertex pairs, per level
    final_graph: Graph
    no_cycles_stop: bool

    def certificate_graph(self, n: int) -> Graph:
        pairs = set()
        for t in self.fingerprints:
            pairs |= t
        return build_graph(n, sorted(pairs))


def _encode_chain(
    n: int,
    params: Params,
    k_stop: float,
    member_pairs_fn,
    container_delta: Optional[float],
    tau: Optional[float],
    step_cache: Optional[dict] = None,
    max_depth: int = 400,
) -> ColouredEncoding:
    ell = params.ell
    g = complete(n)
    fingerprints = []
    cache = step_cache if step_cache is not None else {}
    for _ in range(max_depth):
        if g.m <= k_stop * n ** (1 + 1 / ell):
            return ColouredEncoding(tuple(fingerprints), g, False)
        key = frozenset(g.edges)
        if key not in cache:
            cache[key] = graph_container_step(
                g,
                params.with_instance(k=g.m / n ** (1 + 1 / ell), n=n),
                container_delta=container_delta,
                tau=tau,
            )
        step = cache[key]
        if step.no_cycles:
            return ColouredEncoding(tuple(fingerprints), g, True)
        members = member_pairs_fn(frozenset(g.edges))
        member_ids = {g.edge_index[p] for p in members}
        res = container_for(step.hypergraph, step.tau, step.delta, member_ids)
        t_pairs = _pairs_of(g, res.fingerprint)
        fingerprints.append(t_pairs)
        kept = [
            e for e in sorted(res.container) if g.edges[e] not in t_pairs
        ]
        nxt = g.subgraph_of_edges(kept)
        if nxt.m == g.m:
            raise AssertionError("container chain failed to make progress")
        g = nxt
    raise BudgetExceeded(f"encoding chain exceeded {max_depth} levels")


def encode_coloured(
    free_graph: Graph,
    params: Params,
    k_stop: float,
    container_delta: Optional[float] = None,
    tau: Optional[float] = None,
    step_cache: Optional[dict] = None,
) -> ColouredEncoding:
    """Fingerprint chain for a cycle-free graph: at each level take the
    fingerprint of I inside the current container graph, then recurse on the
    container minus the fingerprint.  Certificate sandwich checked before
    return."""
    n = free_graph.n
    i_pairs = set(free_graph.edges)

    def members(current_edges: frozenset) -> frozenset:
        return frozenset(p for p in i_pairs if p in current_edges)

    enc = _encode_chain(
        n, params, k_stop, members, container_delta, tau, step_cache
    )
    cert = set()
    for t in enc.fingerprints:
        cert |= t
    if not cert <= i_pairs:
        raise AssertionError("fingerprint contains a non-edge of the input")
    if not i_pairs <= cert | set(enc.final_graph.edges):
        raise AssertionError("input escapes certificate plus final container")
    return enc


def replay_encoding(
    fingerprints: Iterable[frozenset],
    n: int,
    params: Params,
    k_stop: float,
    container_delta: Optional[float] = None,
    tau: Optional[float] = None,
    step_cache: Optional[dict] = None,
) -> Graph:
    """The final container graph is a pure function of the fingerprint
    tuple: rerun the chain answering membership from each level's
    fingerprint."""
    fps = list(fingerprints)
    level = {"i": 0}

    def members(current_edges: frozenset) -> frozenset:
        i = level["i"]
        level["i"] += 1
        t = fps[i] if i < len(fps) else frozenset()
        return frozenset(p for p in t if p in current_edges)

    enc = _encode_chain(
        n, params, k_stop, members, container_delta, tau, step_cache
    )
    return enc.final_graph
