"""Levelled path families rooted at a vertex: concentrated, balanced, and
refined t-neighbourhoods, with the pair-count / branching-factor queries the
downstream cycle-finding machinery relies on.

Paths are stored as vertex tuples (x, u_1, ..., u_t); index i into the tuple
is the level-i vertex (index 0 is the root).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graphs import Graph
from .params import Params


class EmptyForbidden:
    """Trivial saturated-set view: nothing is forbidden."""

    def link(self, S: Iterable[int], j: int) -> set[frozenset]:
        return set()

    def contains_saturated(self, edge_ids: Iterable[int]) -> bool:
        return False


@dataclass(frozen=True)
class LevelFamily:
    root: int
    levels: tuple[frozenset, ...]  # A_1 .. A_t

    @property
    def t(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> frozenset:
        # level 0 is the root singleton
        if i == 0:
            return frozenset({self.root})
        return self.levels[i - 1]

    def consistent(self, g: Graph) -> bool:
        for i in range(1, self.t + 1):
            prev = self.level(i - 1)
            for v in self.level(i):
                if not (g.adjacency[v] & prev):
                    return False
        return True


@dataclass(frozen=True)
class PathFamily:
    host: Graph
    base: LevelFamily
    paths: tuple[tuple[int, ...], ...]  # sorted lexicographically
    infeasible: bool = False  # a threshold had to be floored at 1
    emptied: bool = False  # the construction wiped everything out

    @property
    def root(self) -> int:
        return self.base.root

    @property
    def t(self) -> int:
        return self.base.t

    def consistent(self) -> bool:
        g = self.host
        seen = set()
        for p in self.paths:
            if len(p) != self.t + 1 or p[0] != self.root or len(set(p)) != len(p):
                return False
            if p in seen:
                return False
            seen.add(p)
            for i in range(self.t):
                if not g.has_edge(p[i], p[i + 1]):
                    return False
            for i in range(1, self.t + 1):
                if p[i] not in self.base.level(i):
                    return False
        return tuple(sorted(self.paths)) == self.paths

    def path_edge_ids(self, p: Sequence[int]) -> frozenset:
        return frozenset(self.host.edge_id(p[i], p[i + 1]) for i in range(len(p) - 1))

    # -- queries ------------------------------------------------------------

    def subpaths(self, i: int, j: int, u: int, v: int) -> set[tuple[int, ...]]:
        """Distinct stored subpaths (u_i, ..., u_j) with u_i = u and u_j = v."""
        if not 0 <= i < j <= self.t:
            raise ValueError(f"need 0 <= i < j <= {self.t}, got ({i}, {j})")
        return {p[i : j + 1] for p in self.paths if p[i] == u and p[j] == v}

    def count_between(self, i: int, j: int, u: int, v: int) -> int:
        return len(self.subpaths(i, j, u, v))

    def branching_factor(self, v: int, r: int) -> int:
        """Number of distinct (r+1)-st vertices over stored paths whose r-th
        vertex is v."""
        if not 0 <= r <= self.t - 1:
            raise ValueError(f"level index must be in [0, {self.t - 1}], got {r}")
        return len({p[r + 1] for p in self.paths if p[r] == v})

    def max_branching_factor(self) -> int:
        best = 0
        for r in range(self.t):
            for v in {p[r] for p in self.paths}:
                best = max(best, self.branching_factor(v, r))
        return best

    def paths_to(self, w: int) -> list[tuple[int, ...]]:
        return [p for p in self.paths if p[-1] == w]

    def forward_degree(self, v: int, i: int) -> int:
        """|N(v) ∩ A_{i+1}| for v at level i."""
        return len(self.host.adjacency[v] & self.base.level(i + 1))

    def back_degree(self, v: int) -> int:
        """|N(v) ∩ A_{t-1}| for v at the last level."""
        return len(self.host.adjacency[v] & self.base.level(self.t - 1))

    def replace_paths(self, paths: Iterable[tuple[int, ...]]) -> "PathFamily":
        return PathFamily(
            host=self.host,
            base=self.base,
            paths=tuple(sorted(paths)),
            infeasible=self.infeasible,
            emptied=self.emptied,
        )


# ---------------------------------------------------------------------------
# Predicates


def balanced_violations(fam: PathFamily, params: Params) -> list[str]:
    """Empty list iff fam passes every balanced-family condition."""
    t = fam.t
    out = []
    if len(fam.base.level(1)) > params.effective_first_level_cap():
        out.append(f"|A_1| = {len(fam.base.level(1))} exceeds first-level cap")
    if t >= 2 and len(fam.base.level(t)) > params.effective_level_size_cap(t):
        out.append(f"|A_t| = {len(fam.base.level(t))} exceeds last-level cap")
    for i in range(t):
        for j in range(i + 1, t + 1):
            if (i, j) == (0, t):
                continue
            cap = params.effective_pair_path_cap(i, j)
            for u in {p[i] for p in fam.paths}:
                for v in {p[j] for p in fam.paths if p[i] == u}:
                    c = fam.count_between(i, j, u, v)
                    if c > cap:
                        out.append(f"pair ({i},{j},{u},{v}) count {c} > cap {cap}")
    bcap = params.effective_degree_threshold(t) if not params.relaxed else None
    if bcap is not None and fam.max_branching_factor() > bcap:
        out.append(f"branching factor {fam.max_branching_factor()} > {bcap}")
    return out


def refined_violations(
    fam: PathFamily,
    params: Params,
    thresholds: Optional[tuple[float, float, float]] = None,
) -> list[str]:
    """Empty list iff fam passes every refined-family condition (given it is
    already balanced)."""
    t = fam.t
    fwd, back, endpoint = (
        thresholds if thresholds is not None else params.effective_refine_thresholds(t)
    )
    out = []
    for i in range(t):
        for u in fam.base.level(i):
            if fam.forward_degree(u, i) < fwd:
                out.append(f"forward degree of {u} at level {i} below {fwd}")
    if t >= 1:
        for v in fam.base.level(t):
            if t >= 2 and fam.back_degree(v) < back:
                out.append(f"back degree of {v} below {back}")
            if len(fam.paths_to(v)) < endpoint:
                out.append(f"endpoint {v} receives {len(fam.paths_to(v))} < {endpoint}")
    return out


# ---------------------------------------------------------------------------
# Concentrated neighbourhoods


def find_concentrated_at(
    g: Graph, x: int, t: int, params: Params
) -> Optional[LevelFamily]:
    """Try to build a concentrated t-neighbourhood of x: grow levels by full
    neighbourhoods, then peel vertices whose forward degree into the next
    level is below the threshold, to a fixpoint."""
    threshold = params.effective_degree_threshold(min(t, params.ell))
    levels: list[set] = []
    current = {x}
    for _ in range(t):
        nxt = set()
        for v in current:
            nxt |= g.adjacency[v]
        levels.append(nxt)
        current = nxt
    # peel: every vertex at level i < t needs >= threshold neighbours in
    # level i+1; the root's own condition is checked at the end
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            doomed = {
                v for v in levels[i] if len(g.adjacency[v] & levels[i + 1]) < threshold
            }
            if doomed:
                levels[i] -= doomed
                changed = True
    if len(g.adjacency[x] & levels[0]) < threshold:
        return None
    if any(not lv for lv in levels):
        return None
    if len(levels[t - 1]) > params.effective_level_size_cap(min(t, params.ell)):
        return None
    return LevelFamily(root=x, levels=tuple(frozenset(lv) for lv in levels))


def concentrated_search(
    g: Graph, x: int, params: Params
) -> Optional[tuple[int, LevelFamily]]:
    """Minimal t in [2, ell] admitting a concentrated t-neighbourhood of x,
    or None if every t fails."""
    for t in range(2, params.ell + 1):
        fam = find_concentrated_at(g, x, t, params)
        if fam is not None:
            return t, fam
    return None


def t_of_graph(g: Graph, params: Params) -> tuple[Optional[int], frozenset]:
    """min over vertices of the concentrated depth, with the argmin set."""
    best: Optional[int] = None
    argmin: set = set()
    for x in range(g.n):
        res = concentrated_search(g, x, params)
        if res is None:
            continue
        t, _ = res
        if best is None or t < best:
            best, argmin = t, {x}
        elif t == best:
            argmin.add(x)
    return best, frozenset(argmin)


# ---------------------------------------------------------------------------
# Balanced construction


def build_balanced(
    g: Graph,
    x: int,
    t: int,
    forbidden=None,
    params: Optional[Params] = None,
) -> PathFamily:
    """Generate a balanced t-neighbourhood of x avoiding the forbidden
    family: bounded per-vertex neighbour subsets, no revisits, no edge in the
    1-link of the partial path, then a deterministic removal loop until all
    pair-count caps hold."""
    assert params is not None
    if forbidden is None:
        forbidden = EmptyForbidden()
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")

    base = find_concentrated_at(g, x, t, params)
    if base is None:
        return PathFamily(
            host=g,
            base=LevelFamily(root=x, levels=(frozenset(),) * t),
            paths=(),
            emptied=True,
        )
    levels = [set(lv) for lv in base.levels]

    # trim the first level to its cap (drop the largest labels first; the
    # peeled witness already satisfies the forward-degree thresholds and
    # dropping level-1 vertices cannot break them for other levels)
    cap1 = params.effective_first_level_cap()
    if len(levels[0]) > cap1:
        levels[0] = set(sorted(levels[0])[: int(cap1)])
    base = LevelFamily(root=x, levels=tuple(frozenset(lv) for lv in levels))

    q_size, infeasible = params.q_size(min(t, params.ell))

    def q_of(v: int, i: int) -> list[int]:
        # eligibleextension targets for a level-(i-1) vertex
        elig = sorted(g.adjacency[v] & levels[i - 1])
        if q_size:
            elig = elig[:q_size]
        return elig

    paths: list[tuple[int, ...]] = []

    def extend(prefix: list[int], edge_ids: list[int]) -> None:
        i = len(prefix)  # next level to fill
        if i == t + 1:
            paths.append(tuple(prefix))
            return
        link1 = {next(iter(s)) for s in forbidden.link(frozenset(edge_ids), 1)}
        for u in q_of(prefix[-1], i):
            if u in prefix:
                continue
            eid = g.edge_id(prefix[-1], u)
            if eid in link1:
                continue
            extend(prefix + [u], edge_ids + [eid])

    extend([x], [])

    # drop any path whose edge set contains a saturated set (the link filter
    # above only blocks single-edge extensions)
    survivors = [
        p
        for p in paths
        if not forbidden.contains_saturated(
            frozenset(g.edge_id(p[i], p[i + 1]) for i in range(t))
        )
    ]

    fam = PathFamily(
        host=g,
        base=base,
        paths=tuple(sorted(survivors)),
        infeasible=infeasible,
        emptied=not survivors,
    )
    return _enforce_pair_caps(fam, params)


def _enforce_pair_caps(fam: PathFamily, params: Params) -> PathFamily:
    """Remove offending paths in lexicographic order until every pair-count
    cap holds."""
    t = fam.t
    caps = {}
    for i in range(t):
        for j in range(i + 1, t + 1):
            if (i, j) != (0, t):
                caps[(i, j)] = params.effective_pair_path_cap(i, j)
    paths = list(fam.paths)
    while True:
        violating = []  # (i, j, u, v) groups over their cap
        for (i, j), cap in caps.items():
            if cap == float("inf"):
                continue
            groups: dict[tuple[int, int], set] = {}
            for p in paths:
                groups.setdefault((p[i], p[j]), set()).add(p[i : j + 1])
            for (u, v), subs in groups.items():
                if len(subs) > cap:
                    violating.append((i, j, u, v))
        if not violating:
            break
        i, j, u, v = min(violating)
        paths = [p for p in paths if not (p[i] == u and p[j] == v)]
    return fam.replace_paths(paths)


# ---------------------------------------------------------------------------
# Refinement


def refine_balanced(
    fam: PathFamily,
    params: Params,
    thresholds: Optional[tuple[float, float, float]] = None,
) -> PathFamily:
    """Iterate the three removal steps (low forward degree at inner levels,
    low back degree at the last level, too few paths per endpoint) until a
    fixpoint; empty flagged output when the root itself ends up starved."""
    t = fam.t
    fwd, back, endpoint = (
        thresholds if thresholds is not None else params.effective_refine_thresholds(t)
    )
    g = fam.host
    levels = [set(fam.base.level(i)) for i in range(1, t + 1)]
    paths = list(fam.paths)

    def level_set(i: int) -> set:
        return {fam.root} if i == 0 else levels[i - 1]

    changed = True
    while changed:
        changed = False
        # step 1: inner-level forward degrees
        for i in range(1, t):
            doomed = {
                v for v in levels[i - 1] if len(g.adjacency[v] & levels[i]) < fwd
            }
            if doomed:
                levels[i - 1] -= doomed
                paths = [p for p in paths if p[i] not in doomed]
                changed = True
        # step 2: last-level back degrees
        if t >= 2:
            doomed = {
                v for v in levels[t - 1] if len(g.adjacency[v] & levels[t - 2]) < back
            }
            if doomed:
                levels[t - 1] -= doomed
                paths = [p for p in paths if p[t] not in doomed]
                changed = True
        # step 3: per-endpoint path counts
        received: dict[int, int] = {}
        for p in paths:
            received[p[t]] = received.get(p[t], 0) + 1
        doomed = {v for v in levels[t - 1] if received.get(v, 0) < endpoint}
        if doomed:
            levels[t - 1] -= doomed
            paths = [p for p in paths if p[t] not in doomed]
            changed = True

    base = LevelFamily(root=fam.root, levels=tuple(frozenset(lv) for lv in levels))
    out = PathFamily(
        host=g,
        base=base,
        paths=tuple(sorted(paths)),
        infeasible=fam.infeasible,
        emptied=not paths,
    )
    # the loop never removes the root; if its forward degree fails the
    # threshold the refinement is unattainable, so return an emptied family
    if t >= 1 and len(g.adjacency[fam.root] & base.level(1)) < fwd:
        return PathFamily(
            host=g,
            base=LevelFamily(root=fam.root, levels=(frozenset(),) * t),
            paths=(),
            infeasible=fam.infeasible,
            emptied=True,
        )
    return out


# ---------------------------------------------------------------------------
# Paths-through bounds


def paths_through_vertex_bound(
    fam: PathFamily, w: int, v: int, params: Params
) -> tuple[int, float]:
    """(observed, cap): stored paths ending at w that pass through v."""
    if v == fam.root or v == w:
        raise ValueError("v must differ from the root and the endpoint")
    observed = sum(1 for p in fam.paths_to(w) if v in p)
    return observed, params.paths_through_vertex_cap(fam.t)


def paths_through_set_bound(
    fam: PathFamily, w: int, sigma: Iterable[int], params: Params
) -> tuple[int, float]:
    """(observed, cap): stored paths ending at w whose edge set contains
    sigma."""
    sig = frozenset(sigma)
    if not 1 <= len(sig) <= fam.t - 1:
        raise ValueError(f"|sigma| must be in [1, {fam.t - 1}]")
    observed = sum(
        1 for p in fam.paths_to(w) if sig <= fam.path_edge_ids(p)
    )
    return observed, params.paths_through_set_cap(fam.t, len(sig))


# ---------------------------------------------------------------------------
# Dump format: header "x t |P|", one path per line


def dump_path_family(fam: PathFamily) -> str:
    lines = [f"{fam.root} {fam.t} {len(fam.paths)}"]
    for p in fam.paths:
        lines.append(" ".join(str(v) for v in p))
    return "\n".join(lines) + "\n"
