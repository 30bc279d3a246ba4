import itertools
import json
import math
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compatcycles.graphs import (
    CycleOrder,
    GraphError,
    Multigraph,
    PerfectMatching,
    TwoRegularGraph,
    all_cycles,
    all_two_regular,
    canonical_cycle,
    cycle_type_partitions,
    edge_union,
    graph_of_type,
    hamiltonian_decompositions,
    is_compatible,
    is_compatible_graph,
    parse_cycle,
    parse_graph,
    two_factors,
)

from support import cycles


def perms(n_min=3, n_max=8):
    return st.integers(n_min, n_max).flatmap(lambda n: st.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def _union_table(n: int) -> dict:
    table: dict = {}
    cs = cycles(n)
    for i, c1 in enumerate(cs):
        for c2 in cs[i:]:
            table.setdefault(edge_union(c1, c2), []).append((c1, c2))
    return table


def brute_decompositions(H: Multigraph):
    """Independent oracle: all unordered pairs of cycles whose union is H."""
    return sorted(_union_table(H.n).get(H, []))


# parsing -------------------------------------------------------------------

def test_parse_two_bubbles():
    G = parse_graph("(1 2)(3 4)", 4)
    assert G.multigraph.multiplicity(1, 2) == 2
    assert G.multigraph.multiplicity(3, 4) == 2
    assert G.cycle_type == (2, 2)


def test_parse_single_cycle_and_mixed():
    assert parse_graph("(1 2 3 4 5)", 5).cycle_type == (5,)
    G = parse_graph("(1 2 3)(4 5)", 5)
    assert G.cycle_type == (3, 2)
    assert G.multigraph.multiplicity(4, 5) == 2


@pytest.mark.parametrize("text", ["(1 2)(2 3)", "(1)(2 3)", "(1 2", "(1 2)(3 5)", "1 2 3", "(1 a)"])
def test_parse_rejects(text):
    with pytest.raises(GraphError):
        parse_graph(text, 3 if "5" not in text else 4)


def test_parse_missing_label():
    with pytest.raises(GraphError):
        parse_graph("(1 2)(3 4)", 5)


def test_notation_round_trip():
    for G in all_two_regular(6):
        assert parse_graph(G.notation()) == G


# canonical cycles ----------------------------------------------------------

def test_canonical_examples():
    assert canonical_cycle((4, 3, 2, 1)).order == (1, 2, 3, 4)
    assert canonical_cycle((1, 3, 2, 4)).order == (1, 3, 2, 4)
    # rotations/reflections of (2,3,1,5,4): starting at 1 gives 1 5 4 2 3 or 1 3 2 4 5
    assert canonical_cycle((2, 3, 1, 5, 4)).order == (1, 3, 2, 4, 5)


def test_canonical_rejects_non_permutation():
    with pytest.raises(GraphError):
        canonical_cycle((1, 2, 2, 4))
    with pytest.raises(GraphError):
        CycleOrder((1, 4, 3, 2))


@given(perms())
def test_canonical_constant_on_class(p):
    n = len(p)
    rep = canonical_cycle(p)
    assert rep.order[0] == 1 and rep.order[1] < rep.order[-1]
    for r in range(n):
        rot = p[r:] + p[:r]
        assert canonical_cycle(rot) == rep
        assert canonical_cycle(rot[::-1]) == rep
    assert canonical_cycle(rep.order) == rep


def test_parse_cycle_canonicalises():
    assert parse_cycle("4 3 2 1") == CycleOrder((1, 2, 3, 4))


# all_cycles ------------------------------------------------------------------

def test_all_cycles_n4():
    assert [c.order for c in all_cycles(4)] == [(1, 2, 3, 4), (1, 2, 4, 3), (1, 3, 2, 4)]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_all_cycles_count_and_unique(n):
    cs = list(all_cycles(n))
    assert len(cs) == math.factorial(n - 1) // 2
    assert len(set(cs)) == len(cs)
    assert cs == sorted(cs)


def test_all_cycles_rejects_small_n():
    with pytest.raises(GraphError):
        list(all_cycles(2))


# unions ----------------------------------------------------------------------

def test_union_multiplicities():
    bubble = Multigraph.from_edges(2, [(1, 2), (1, 2)])
    single = Multigraph.from_edges(2, [(1, 2)])
    assert edge_union(bubble, single).multiplicity(1, 2) == 3
    H = edge_union(CycleOrder((1, 2, 3, 4)), CycleOrder((1, 3, 2, 4)))
    assert sum(m for _, _, m in H.edges) == 8
    assert H.is_regular(4)
    M = PerfectMatching(((1, 2), (3, 4)))
    twice = edge_union(M, M)
    assert TwoRegularGraph.from_multigraph(twice) == parse_graph("(1 2)(3 4)")


def test_union_mismatched_n():
    with pytest.raises(GraphError):
        edge_union(CycleOrder((1, 2, 3, 4)), CycleOrder((1, 2, 3, 4, 5)))


@given(st.integers(3, 8).flatmap(lambda n: st.tuples(st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1)))))
def test_union_commutative_and_degree_additive(pq):
    a, b = canonical_cycle(pq[0]), canonical_cycle(pq[1])
    H = edge_union(a, b)
    assert H == edge_union(b, a)
    assert all(d == 4 for d in H.degrees)


def test_multigraph_json_round_trip():
    H = edge_union(parse_graph("(1 2)(3 4 5)"), CycleOrder((1, 3, 2, 4, 5)))
    data = json.loads(json.dumps(H.to_dict()))
    assert data["edges"] == sorted(data["edges"])
    assert Multigraph.from_dict(data) == H


# decompositions ------------------------------------------------------------------

def test_decompositions_bubbles_with_cycle():
    H = edge_union(parse_graph("(1 2)(3 4)"), CycleOrder((1, 3, 2, 4)))
    assert [(a.order, b.order) for a, b in hamiltonian_decompositions(H)] == [((1, 2, 3, 4), (1, 2, 4, 3))]


def test_decompositions_doubled_cycle():
    c = CycleOrder((1, 2, 3, 4))
    assert hamiltonian_decompositions(edge_union(c, c)) == [(c, c)]


def test_decompositions_bubbles_with_bubbles():
    # the union is the doubled 4-cycle 1-2-4-3, which splits as that cycle twice
    H = edge_union(parse_graph("(1 2)(3 4)"), parse_graph("(1 3)(2 4)"))
    c = CycleOrder((1, 2, 4, 3))
    assert hamiltonian_decompositions(H) == [(c, c)]
    assert brute_decompositions(H) == [(c, c)]


def test_decompositions_require_4_regular():
    with pytest.raises(GraphError):
        hamiltonian_decompositions(CycleOrder((1, 2, 3, 4)).multigraph)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_decompositions_match_brute_force(n):
    for G in all_two_regular(n):
        for C in cycles(n)[::3]:
            H = edge_union(G, C)
            assert hamiltonian_decompositions(H) == brute_decompositions(H)


@given(st.integers(4, 8).flatmap(lambda n: st.tuples(st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1)))))
@settings(max_examples=50)
def test_decompositions_reunite(pq):
    H = edge_union(canonical_cycle(pq[0]), canonical_cycle(pq[1]))
    pairs = hamiltonian_decompositions(H)
    assert pairs
    for c1, c2 in pairs:
        assert edge_union(c1, c2) == H


# compatibility -------------------------------------------------------------------

def test_is_compatible_examples():
    G = parse_graph("(1 2)(3 4)")
    assert is_compatible(G, CycleOrder((1, 3, 2, 4)))
    assert not is_compatible(G, CycleOrder((1, 2, 3, 4)))
    assert is_compatible(parse_graph("(1 2 3 4)"), CycleOrder((1, 2, 3, 4)))


def test_is_compatible_mismatched_n():
    with pytest.raises(GraphError):
        is_compatible(parse_graph("(1 2)(3 4)"), CycleOrder((1, 2, 3, 4, 5)))


@given(st.integers(4, 7).flatmap(lambda n: st.tuples(
    st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1)),
    st.sampled_from(cycle_type_partitions(n)))))
@settings(max_examples=60)
def test_is_compatible_relabel_invariant(data):
    labels, cyc, sigma, parts = data
    n = len(labels)
    G, i = [], 0
    for p in parts:
        G.append(tuple(labels[i:i + p]))
        i += p
    G = TwoRegularGraph.from_cycles(G, n)
    C = canonical_cycle(cyc)
    perm = dict(zip(range(1, n + 1), sigma))
    assert is_compatible(G, C) == is_compatible(G.relabel(perm), C.relabel(perm))


def test_compatible_graph_examples():
    G = parse_graph("(1 2)(3 4)")
    assert is_compatible_graph(G, parse_graph("(1 3 2 4)"))
    # union is the doubled 4-cycle 1-2-4-3: one copy per side
    assert is_compatible_graph(G, parse_graph("(1 3)(2 4)"))
    assert is_compatible_graph(parse_graph("(1 2 3 4)"), parse_graph("(1 2 3 4)"))


def test_compatible_graph_rejects_three_cycles():
    with pytest.raises(GraphError):
        is_compatible_graph(parse_graph("(1 2)(3 4)(5 6)"), parse_graph("(1 2)(3 4)(5 6)"))


def test_compatible_graph_weaker_than_compatible_cycle():
    for G in all_two_regular(5):
        for C in cycles(5):
            if is_compatible(G, C):
                assert is_compatible_graph(G, C.as_graph())


def test_two_factors_of_doubled_cycle():
    c = CycleOrder((1, 2, 3, 4, 5))
    H = edge_union(c, c)
    halves = list(two_factors(H))
    assert c.multigraph in halves
    for F in halves:
        assert F.is_regular(2)


# enumeration helpers -------------------------------------------------------------

def test_all_two_regular_counts():
    # labelled 2-regular loopless multigraphs
    assert [sum(1 for _ in all_two_regular(n)) for n in range(2, 9)] == [1, 1, 6, 22, 130, 822, 6202]


def test_graph_of_type():
    assert graph_of_type((3, 2)) == parse_graph("(1 2 3)(4 5)")
    assert cycle_type_partitions(6) == [(6,), (4, 2), (3, 3), (2, 2, 2)]


def test_relabel_round_trip():
    G = parse_graph("(1 2 3)(4 5 6)")
    sigma = {1: 4, 2: 6, 3: 1, 4: 2, 5: 3, 6: 5}
    inv = {v: k for k, v in sigma.items()}
    assert G.relabel(sigma).relabel(inv) == G
    assert sorted(itertools.chain.from_iterable(G.relabel(sigma).cycles)) == list(range(1, 7))
