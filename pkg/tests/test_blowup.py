import math

import pytest
from hypothesis import given, settings, strategies as st

from cyclecontainers.graphs import RngSpec, build_graph, cycle_graph, gnm
from cyclecontainers.oracle import girth_at_most, is_free
from cyclecontainers.blowup import (
    BlowupSpec,
    blow_up,
    brute_count_matchings,
    count_matchings,
    enumerate_matchings,
    forbidden_lengths,
    random_intersect_blowup,
    sample_blowup,
    verify_family_free,
)


def test_matching_counts_pinned():
    assert count_matchings(3, 3) == 34
    assert count_matchings(1, 1) == 2
    assert count_matchings(2, 2) == 7


@given(st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=25, deadline=None)
def test_matching_closed_form_matches_brute_force(a, b):
    assert count_matchings(a, b) == brute_count_matchings(a, b)


def test_enumerate_matchings_complete_and_distinct():
    ms = enumerate_matchings(3, 3)
    assert len(ms) == 34
    assert len(set(ms)) == 34
    for m in ms:
        lefts = [p[0] for p in m]
        rights = [p[1] for p in m]
        assert len(set(lefts)) == len(lefts)
        assert len(set(rights)) == len(rights)


def test_blowup_spec_family_size():
    base = cycle_graph(5)
    spec = BlowupSpec(base=base, b=3)
    assert spec.choices_per_edge == 34
    assert spec.log2_family_size() == pytest.approx(5 * math.log2(34))


def single_edge_spec(b=3):
    return BlowupSpec(base=build_graph(2, [(0, 1)]), b=b)


def test_blowup_empty_matching():
    spec = single_edge_spec()
    # choice index 0 is the empty matching (enumeration by size then lex)
    g = blow_up(spec, [0])
    assert g.n == 6 and g.m == 0


def test_blowup_perfect_matching():
    spec = single_edge_spec()
    perfect_idx = spec.choices_per_edge - 1
    g = blow_up(spec, [perfect_idx])
    assert g.m == 3
    assert all(g.degree(v) == 1 for v in range(6))


def test_blowup_c5_all_perfect_is_2_regular():
    base = cycle_graph(5)
    spec = BlowupSpec(base=base, b=3)
    perfect_idx = spec.choices_per_edge - 1
    g = blow_up(spec, [perfect_idx] * base.m)
    assert g.n == 15 and g.m == 15
    assert all(g.degree(v) == 2 for v in range(15))


def test_c5_blowups_avoid_short_and_double_cycles():
    base = cycle_graph(5)
    spec = BlowupSpec(base=base, b=3)
    for seed in range(5):
        g = sample_blowup(spec, RngSpec(seed=seed, label="c5"))
        ok, witness = verify_family_free(g, [3, 6])
        assert ok, witness


def test_triangle_detected_as_witness():
    g = build_graph(3, [(0, 1), (0, 2), (1, 2)])
    ok, witness = verify_family_free(g, [3])
    assert not ok and witness is not None


def test_forbidden_lengths():
    assert forbidden_lengths(2) == [4]
    assert forbidden_lengths(3) == [3, 6]
    assert forbidden_lengths(4) == [3, 4, 8]


@given(st.integers(0, 2**32))
@settings(max_examples=20, deadline=None)
def test_random_blowups_of_good_bases_are_free(seed):
    # bases free of C3..C_ell and C_{2 ell} blow up to F-free graphs
    ell = 2
    base = cycle_graph(5)  # girth 5 > 4
    spec = BlowupSpec(base=base, b=2)
    g = sample_blowup(spec, RngSpec(seed=seed, label="blow"))
    ok, witness = verify_family_free(g, forbidden_lengths(ell))
    assert ok, witness


def test_random_intersect_blowup_p1_and_freeness():
    base = cycle_graph(7)  # girth 7 > 2*ell for ell = 3
    rep = random_intersect_blowup(base, p=1.0, eps=2.0, ell=3, rng=RngSpec(seed=1, label="ib"))
    assert rep.block_size == 2
    assert rep.edge_count == rep.graph.m
    assert is_free(rep.graph, 3)


def test_random_intersect_blowup_rejects_short_girth():
    with pytest.raises(ValueError):
        random_intersect_blowup(
            cycle_graph(4), p=0.5, eps=1.0, ell=2, rng=RngSpec(seed=0, label="x")
        )


def test_random_intersect_blowup_small_p_gives_sparse_output():
    base = cycle_graph(9)
    rep = random_intersect_blowup(
        base, p=0.001, eps=0.002, ell=2, rng=RngSpec(seed=3, label="sp")
    )
    assert rep.graph.m <= rep.host.m
