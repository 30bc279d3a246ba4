import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compatcycles.counting import catalan
from compatcycles.feyn import (
    FeynmanTree,
    canonical_channel,
    common_trees,
    count_sharing,
    identity_order,
    partial_amplitude_unsigned,
    planar_trees,
    shares_diagram,
    tree_value,
)
from compatcycles.graphs import CycleOrder, all_cycles, canonical_cycle
from compatcycles.kinematics import DegenerateKinematicsError, from_upper, random_kinematics


def chans(trees):
    return {frozenset(map(frozenset, t.channels)) for t in trees}


def test_planar_n4():
    got = chans(planar_trees(CycleOrder((1, 2, 3, 4))))
    assert got == {frozenset({frozenset({1, 2})}), frozenset({frozenset({2, 3})})}
    # channels are stored on the side without label n
    assert canonical_channel({1, 4}, 4) == frozenset({2, 3})


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9])
def test_planar_count_is_catalan(n):
    r = random.Random(n)
    for _ in range(5):
        p = list(range(1, n + 1))
        r.shuffle(p)
        trees = planar_trees(canonical_cycle(p))
        assert len(trees) == catalan(n - 2)
        assert all(len(t.channels) == n - 3 for t in trees)


def test_common_trees_n4():
    I = CycleOrder((1, 2, 3, 4))
    assert common_trees(I, I) == planar_trees(I)
    assert chans(common_trees(I, CycleOrder((1, 2, 4, 3)))) == {frozenset({frozenset({1, 2})})}
    assert chans(common_trees(I, CycleOrder((1, 3, 2, 4)))) == {frozenset({frozenset({2, 3})})}


def test_tree_values():
    k = random_kinematics(5, 1)
    t = FeynmanTree.from_channels(5, [{1, 2}, {4, 5}])
    assert tree_value(t, k) == 1 / (k[1, 2] * k[4, 5])
    t4 = FeynmanTree.from_channels(4, [{1, 2}])
    k4 = random_kinematics(4, 1)
    assert tree_value(t4, k4) == 1 / k4[1, 2]


def test_tree_value_reports_channel():
    k = from_upper(4, {(1, 2): 0, (1, 3): 1, (1, 4): -1, (2, 3): -1, (2, 4): 1, (3, 4): 0})
    with pytest.raises(DegenerateKinematicsError) as exc:
        tree_value(FeynmanTree.from_channels(4, [{1, 2}]), k)
    assert exc.value.channel == frozenset({1, 2})


def test_four_point_amplitudes():
    k = random_kinematics(4, 1)
    I = CycleOrder((1, 2, 3, 4))
    assert partial_amplitude_unsigned(I, I, k) == 1 / k[1, 2] + 1 / k[2, 3]
    assert partial_amplitude_unsigned(I, CycleOrder((1, 2, 4, 3)), k) == 1 / k[1, 2]


def test_disjoint_orderings_vanish():
    I = identity_order(5)
    orth = [b for b in all_cycles(5) if not shares_diagram(I, b)]
    assert orth == [CycleOrder((1, 3, 5, 2, 4))]
    assert partial_amplitude_unsigned(I, orth[0], random_kinematics(5, 2)) == Fraction(0)


def test_sharing_counts():
    I4 = identity_order(4)
    assert all(shares_diagram(I4, b) for b in all_cycles(4))
    assert sum(not shares_diagram(identity_order(6), b) for b in all_cycles(6)) == 15
    assert [count_sharing(n) for n in (4, 5, 6, 7)] == [3, 11, 45, 197]


@given(st.integers(4, 7).flatmap(lambda n: st.tuples(
    st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1)),
    st.integers(0, 50))))
@settings(max_examples=40, deadline=None)
def test_symmetry_and_relabel_covariance(data):
    p, q, s, seed = data
    n = len(p)
    a, b = canonical_cycle(p), canonical_cycle(q)
    k = random_kinematics(n, seed)
    v = partial_amplitude_unsigned(a, b, k)
    assert v == partial_amplitude_unsigned(b, a, k)
    sigma = dict(zip(range(1, n + 1), s))
    assert partial_amplitude_unsigned(a.relabel(sigma), b.relabel(sigma), k.relabel(sigma)) == v


def test_channel_identity_on_trees():
    k = random_kinematics(7, 4)
    full = set(range(1, 8))
    for t in planar_trees(identity_order(7)):
        for ch in t.channels:
            assert k.invariant(ch) == k.invariant(full - ch)


def test_channel_bounds():
    with pytest.raises(ValueError):
        canonical_channel({1}, 5)
    with pytest.raises(ValueError):
        FeynmanTree.from_channels(5, [{1, 2}])
