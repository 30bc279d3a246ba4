"""Partial amplitudes from planar cubic trees, in exact arithmetic.

A tree is stored as its set of channels: the leaf subsets cut off by its
internal edges, each taken on the side not containing label ``n``.  Two
orderings share a tree exactly when they share that channel set, so
intersections are plain set operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .graphs import CycleOrder, GraphError, all_cycles, canonical_cycle
from .kinematics import DegenerateKinematicsError, KinematicPoint

Channel = frozenset


def canonical_channel(labels, n: int) -> Channel:
    L = frozenset(labels)
    if not 2 <= len(L) <= n - 2:
        raise ValueError(f"channel {sorted(L)} must have between 2 and n-2 labels")
    return frozenset(range(1, n + 1)) - L if n in L else L


def _channel_key(ch: Channel):
    return (len(ch), tuple(sorted(ch)))


@dataclass(frozen=True)
class FeynmanTree:
    n: int
    channels: tuple[Channel, ...]

    @classmethod
    def from_channels(cls, n: int, channels) -> "FeynmanTree":
        chans = sorted({canonical_channel(c, n) for c in channels}, key=_channel_key)
        if len(chans) != n - 3:
            raise ValueError(f"a cubic tree on {n} leaves has {n - 3} channels, got {len(chans)}")
        return cls(n, tuple(chans))

    def __str__(self) -> str:
        return " ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.channels)


@lru_cache(maxsize=None)
def _bracketings(m: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Interval sets of all full binary trees on ``m`` ordered leaves (root excluded)."""

    @lru_cache(maxsize=None)
    def rec(i: int, j: int):
        if i == j:
            return ((),)
        out = []
        for k in range(i, j):
            for left in rec(i, k):
                for right in rec(k + 1, j):
                    out.append(left + right + ((i, j),))
        return tuple(out)

    return tuple(t[:-1] for t in rec(0, m - 1))


def _as_order(alpha) -> CycleOrder:
    return alpha if isinstance(alpha, CycleOrder) else canonical_cycle(alpha)


def planar_trees(alpha) -> frozenset[FeynmanTree]:
    """Every cubic tree with a planar embedding in ordering ``alpha``; there are ``C(n-2)``."""
    alpha = _as_order(alpha)
    if alpha.n < 4:
        raise GraphError("planar_trees needs n >= 4")
    return _planar(alpha.order)


@lru_cache(maxsize=4096)
def _planar(order: tuple[int, ...]) -> frozenset[FeynmanTree]:
    n = len(order)
    # leaves order[0..n-2] hang below a root at order[n-1]
    trees = set()
    for intervals in _bracketings(n - 1):
        chans = [canonical_channel(order[i:j + 1], n) for i, j in intervals]
        trees.add(FeynmanTree(n, tuple(sorted(chans, key=_channel_key))))
    return frozenset(trees)


def common_trees(alpha, beta) -> frozenset[FeynmanTree]:
    alpha, beta = _as_order(alpha), _as_order(beta)
    if alpha.n != beta.n:
        raise GraphError("orderings have different lengths")
    return planar_trees(alpha) & planar_trees(beta)


def tree_value(tree: FeynmanTree, kin: KinematicPoint) -> Fraction:
    """Product of inverse channel invariants (pair sums over ``a < b``)."""
    value = Fraction(1)
    for ch in tree.channels:
        inv = kin.invariant(ch)
        if inv == 0:
            raise DegenerateKinematicsError(f"channel {sorted(ch)} vanishes", channel=ch)
        value /= inv
    return value


def partial_amplitude_unsigned(alpha, beta, kin: KinematicPoint) -> Fraction:
    """Sum over trees planar in both orderings; the overall sign is not tracked."""
    return sum((tree_value(t, kin) for t in sorted(common_trees(alpha, beta), key=str)), Fraction(0))


def shares_diagram(alpha, beta) -> bool:
    return bool(common_trees(alpha, beta))


def identity_order(n: int) -> CycleOrder:
    return CycleOrder(tuple(range(1, n + 1)))


def count_sharing(n: int, alpha=None) -> int:
    """Number of orderings sharing at least one tree with ``alpha`` (identity by default)."""
    ref = planar_trees(alpha if alpha is not None else identity_order(n))
    return sum(1 for beta in all_cycles(n) if ref & planar_trees(beta))
