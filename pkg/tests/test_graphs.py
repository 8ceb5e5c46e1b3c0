import pytest
from hypothesis import given, settings, strategies as st

from cyclecontainers.graphs import (
    Graph,
    GraphError,
    RngSpec,
    build_graph,
    complete,
    complete_bipartite,
    cycle_graph,
    gnm,
    gnp,
    gnp_coupled,
    k_of_graph,
    min_degree_prune,
    read_edge_list,
    write_edge_list,
)


def test_triangle_edge_ids_are_lexicographic():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert g.edges == ((0, 1), (0, 2), (1, 2))
    assert g.edge_id(0, 1) == 0
    assert g.edge_id(0, 2) == 1
    assert g.edge_id(1, 2) == 2


def test_self_loop_rejected():
    with pytest.raises(GraphError):
        build_graph(2, [(0, 0)])


def test_duplicate_edge_rejected():
    with pytest.raises(GraphError):
        build_graph(3, [(0, 1), (1, 0)])


def test_k4_has_six_edges():
    g = complete(4)
    assert g.m == 6
    assert g.consistent()


def test_complete_bipartite_3_3():
    g = complete_bipartite(3, 3)
    assert g.m == 9
    left, right = {0, 1, 2}, {3, 4, 5}
    for u, v in g.edges:
        assert (u in left) != (v in left)
    assert all(g.neighbors(u) == frozenset(right) for u in left)


def test_gnp_extremes():
    rng = RngSpec(seed=7, label="x")
    assert gnp(10, 0.0, rng).m == 0
    assert gnp(10, 1.0, rng).m == 45


def test_gnp_deterministic_per_seed():
    a = gnp(12, 0.4, RngSpec(seed=3, label="g"))
    b = gnp(12, 0.4, RngSpec(seed=3, label="g"))
    c = gnp(12, 0.4, RngSpec(seed=4, label="g"))
    assert a.edges == b.edges
    assert a.edges != c.edges or a.m == c.m  # different seed, almost surely differs


@given(st.integers(0, 2**32), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
@settings(max_examples=40, deadline=None)
def test_coupled_samples_are_nested_in_p(seed, p1, p2):
    lo, hi = min(p1, p2), max(p1, p2)
    rng = RngSpec(seed=seed, label="couple")
    g_lo = gnp_coupled(9, lo, rng)
    g_hi = gnp_coupled(9, hi, rng)
    assert set(g_lo.edges) <= set(g_hi.edges)


def test_gnm_edge_count_and_determinism():
    g = gnm(10, 17, RngSpec(seed=5, label="m"))
    h = gnm(10, 17, RngSpec(seed=5, label="m"))
    assert g.m == 17 and g.edges == h.edges


def test_prune_path_with_d2_empties():
    g = build_graph(3, [(0, 1), (1, 2)])
    res = min_degree_prune(g, 2)
    assert res.graph.m == 0


def test_prune_k4_with_d3_unchanged():
    g = complete(4)
    assert min_degree_prune(g, 3).graph.edges == g.edges


def test_prune_pendant_off_k4():
    g = build_graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
    res = min_degree_prune(g, 2)
    assert set(res.graph.edges) == set(complete(4).edges)


edge_sets = st.integers(4, 8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda p: p[0] < p[1]
            ),
            max_size=12,
        ),
    )
)


@given(edge_sets)
@settings(max_examples=50, deadline=None)
def test_edge_list_round_trip(case):
    n, pairs = case
    g = build_graph(n, sorted(pairs))
    assert read_edge_list(write_edge_list(g)).edges == g.edges


@given(edge_sets)
@settings(max_examples=50, deadline=None)
def test_adjacency_matches_edge_list(case):
    n, pairs = case
    g = build_graph(n, sorted(pairs))
    assert g.consistent()
    for u, v in g.edges:
        assert v in g.adjacency[u] and u in g.adjacency[v]


def test_subgraph_of_edges():
    g = complete(4)
    sub = g.subgraph_of_edges([0, 1])
    assert sub.n == 4 and sub.edges == (g.edge_pair(0), g.edge_pair(1))


def test_cycle_graph_and_k_of_graph():
    g = cycle_graph(6)
    assert g.m == 6
    assert k_of_graph(g, 2) == pytest.approx(6 / 6**1.5)


def test_rng_split_gives_independent_labelled_streams():
    base = RngSpec(seed=11, label="root")
    a = base.split("a").stream().random()
    b = base.split("b").stream().random()
    a2 = base.split("a").stream().random()
    assert a == a2 and a != b
