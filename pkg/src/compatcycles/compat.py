"""Constructive generation of compatible cycles.

All-even graphs are split into two alternating perfect matchings ``A``/``B``;
a compatible cycle is ``P ∪ Q`` where ``P ∪ A``, ``Q ∪ B`` and ``P ∪ Q`` are
all hamiltonian cycles, so ``G ∪ (P ∪ Q) = (A ∪ P) ∪ (B ∪ Q)``.  Graphs with
odd cycles are first *bandaged* (one vertex per odd cycle is absorbed into an
edge), solved in the all-even case, and the absorbed vertices re-inserted.

Every label-dependent choice (which vertex to start from, which way to walk a
cycle, which neighbour to contract toward) is made by a vertex ``priority``
ordering, defaulting to increasing labels.  Transporting the priority along a
relabelling transports the output, which is what makes the construction
equivariant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .graphs import (
    CycleOrder,
    GraphError,
    PerfectMatching,
    TwoRegularGraph,
    all_cycles,
    canonical_cycle,
    is_compatible,
)

Mate = dict[int, int]


class VerificationError(AssertionError):
    """A generated cycle failed the hamiltonian-decomposition oracle."""

    def __init__(self, graph, failures):
        self.graph = graph
        self.failures = list(failures)
        super().__init__(f"{len(self.failures)} generated cycle(s) not compatible with {graph}")


def _rank(vertices: Iterable[int], priority: Sequence[int] | None) -> dict[int, int]:
    vertices = set(vertices)
    if priority is None:
        order = sorted(vertices)
    else:
        order = [v for v in priority if v in vertices]
        if set(order) != vertices or len(order) != len(vertices):
            raise GraphError("priority must list every vertex exactly once")
    return {v: i for i, v in enumerate(order)}


def _by_rank(vertices: Iterable[int], rank: dict[int, int]) -> list[int]:
    return sorted(vertices, key=rank.__getitem__)


def _is_single_cycle(m1: Mate, m2: Mate) -> bool:
    start = next(iter(m1))
    v, steps = start, 0
    while True:
        v = m2[m1[v]]
        steps += 2
        if v == start:
            return steps == len(m1)


def _pair_cycle(P: Mate, Q: Mate) -> CycleOrder:
    order, v = [1], 1
    use_p = True
    while True:
        v = P[v] if use_p else Q[v]
        use_p = not use_p
        if v == 1:
            break
        order.append(v)
    return canonical_cycle(order)


# ---------------------------------------------------------------------------
# matchings

@dataclass(frozen=True)
class MatchingSplit:
    A: PerfectMatching
    B: PerfectMatching


def _split_cycles(cycles: Iterable[Sequence[int]], rank: dict[int, int]) -> tuple[Mate, Mate]:
    A: Mate = {}
    B: Mate = {}
    for cyc in cycles:
        if len(cyc) % 2:
            raise GraphError(f"odd cycle {tuple(cyc)} cannot be split into matchings")
        i = min(range(len(cyc)), key=lambda j: rank[cyc[j]])
        seq = list(cyc[i:]) + list(cyc[:i])
        if len(seq) > 2 and rank[seq[-1]] < rank[seq[1]]:
            seq = [seq[0]] + seq[:0:-1]
        for j, a in enumerate(seq):
            b = seq[(j + 1) % len(seq)]
            side = A if j % 2 == 0 else B
            side[a], side[b] = b, a
    return A, B


def matching_split(G: TwoRegularGraph, priority: Sequence[int] | None = None) -> MatchingSplit:
    """Alternating 2-colouring of every (even) cycle of ``G``.

    The edge from each cycle's first vertex (by priority) toward its earlier
    neighbour goes to ``A``.
    """
    if not G.is_even:
        raise GraphError(f"{G} has an odd cycle")
    A, B = _split_cycles(G.cycles, _rank(range(1, G.n + 1), priority))
    return MatchingSplit(PerfectMatching.from_mate(A), PerfectMatching.from_mate(B))


def _completions(A: Mate, rank: dict[int, int]) -> Iterator[Mate]:
    verts = _by_rank(A, rank)
    v = verts[0]
    P: Mate = {}
    visited = {v, A[v]}

    def rec(end: int):
        if len(visited) == len(A):
            P[end], P[v] = v, end
            yield dict(P)
            del P[end], P[v]
            return
        for p in verts:
            if p in visited:
                continue
            a = A[p]
            P[end], P[p] = p, end
            visited.update((p, a))
            yield from rec(a)
            visited.difference_update((p, a))
            del P[end], P[p]

    yield from rec(A[v])


def cycle_completions(A: PerfectMatching, priority: Sequence[int] | None = None) -> Iterator[PerfectMatching]:
    """Every matching ``P`` with ``P ∪ A`` a hamiltonian cycle, by path extension.

    Starting at the first vertex ``v``, follow ``A`` and repeatedly join the
    path's end to a fresh vertex; the last edge returns to ``v``.  There are
    ``(n-2)!!`` of them.
    """
    if A.n % 2 or A.n < 4:
        raise GraphError("cycle_completions needs an even vertex count n >= 4")
    for P in _completions(A.mate, _rank(A.mate, priority)):
        yield PerfectMatching.from_mate(P)


def _all_matchings(verts: list[int]) -> Iterator[Mate]:
    if not verts:
        yield {}
        return
    v, rest = verts[0], verts[1:]
    for i, w in enumerate(rest):
        for m in _all_matchings(rest[:i] + rest[i + 1:]):
            m[v], m[w] = w, v
            yield m


def _third(B: Mate, P: Mate, verts: list[int]) -> Iterator[Mate]:
    if len(verts) == 4:
        for Q in _all_matchings(verts):
            if _is_single_cycle(Q, B) and _is_single_cycle(Q, P):
                yield Q
        return
    v = verts[0]
    b, p = B[v], P[v]
    for q in verts[1:]:
        if q == b or q == p:
            continue
        beta, pi = B[q], P[q]
        sub = [x for x in verts if x != v and x != q]
        B2 = {x: B[x] for x in sub}
        B2[b], B2[beta] = beta, b
        P2 = {x: P[x] for x in sub}
        P2[p], P2[pi] = pi, p
        for Q in _third(B2, P2, sub):
            Q[v], Q[q] = q, v
            yield Q


def third_matchings(
    B: PerfectMatching, P: PerfectMatching, priority: Sequence[int] | None = None
) -> Iterator[PerfectMatching]:
    """Matchings ``Q`` with both ``Q ∪ B`` and ``P ∪ Q`` hamiltonian cycles.

    Recursive: join the first vertex ``v`` to some ``q`` that is neither its
    ``B``- nor ``P``-neighbour, splice ``v, q`` out of ``B`` and ``P`` and
    recurse on the remaining vertices; four vertices are settled by checking
    all three matchings.  Yields at least ``(n-3)!!`` distinct matchings.
    """
    if set(B.mate) != set(P.mate):
        raise GraphError("B and P live on different vertex sets")
    if B.n % 2 or B.n < 4:
        raise GraphError("third_matchings needs an even vertex count n >= 4")
    rank = _rank(B.mate, priority)
    for Q in _third(B.mate, P.mate, _by_rank(B.mate, rank)):
        yield PerfectMatching.from_mate(Q)


def _pq_pairs(A: Mate, B: Mate, rank: dict[int, int]) -> Iterator[tuple[Mate, Mate]]:
    verts = _by_rank(A, rank)
    for P in _completions(A, rank):
        for Q in _third(B, P, verts):
            yield P, Q


# ---------------------------------------------------------------------------
# compatible sets

def double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def theorem_bound(G: TwoRegularGraph) -> int:
    """Guaranteed number of compatible cycles (rounded up)."""
    f = math.factorial(G.n - 2)
    d = 2 if G.is_even else 4
    return -(-f // d)


@dataclass(frozen=True)
class CompatibleSet:
    graph: TwoRegularGraph
    cycles: tuple[CycleOrder, ...]
    verified: bool = False
    bound: int = 0

    @property
    def count(self) -> int:
        return len(self.cycles)

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __contains__(self, c):
        return c in set(self.cycles)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.notation(),
            "count": self.count,
            "bound": self.bound,
            "verified": self.verified,
            "cycles": [str(c) for c in self.cycles],
        }


def _finish(G: TwoRegularGraph, cycles: Iterable[CycleOrder], verify: bool) -> CompatibleSet:
    cycles = tuple(sorted(set(cycles)))
    if verify:
        bad = [c for c in cycles if not is_compatible(G, c)]
        if bad:
            raise VerificationError(G, bad)
    return CompatibleSet(G, cycles, verified=verify, bound=theorem_bound(G))


def _unique(stream: Iterable[CycleOrder]) -> Iterator[CycleOrder]:
    seen: set[CycleOrder] = set()
    for c in stream:
        if c not in seen:
            seen.add(c)
            yield c


def iter_generate_even(G: TwoRegularGraph, priority: Sequence[int] | None = None) -> Iterator[CycleOrder]:
    """Lazy stream of distinct compatible cycles for an all-even graph."""
    if not G.is_even:
        raise GraphError(f"{G} has an odd cycle")
    if G.n < 4:
        raise GraphError("need n >= 4")
    rank = _rank(range(1, G.n + 1), priority)
    A, B = _split_cycles(G.cycles, rank)
    yield from _unique(_pair_cycle(P, Q) for P, Q in _pq_pairs(A, B, rank))


def generate_even(G: TwoRegularGraph, verify: bool = False, priority: Sequence[int] | None = None) -> CompatibleSet:
    return _finish(G, iter_generate_even(G, priority), verify)


# ---------------------------------------------------------------------------
# bandaging

@dataclass(frozen=True)
class BandageRecord:
    vertex: int            # original label of the absorbed vertex
    contracted_to: int     # original label of the neighbour it was merged into
    edge: tuple[int, int]  # marked edge in the bandaged graph's labels


@dataclass(frozen=True)
class BandagedGraph:
    original: TwoRegularGraph
    graph: TwoRegularGraph              # relabelled 1..n-k
    labels: tuple[int, ...]             # labels[i - 1] is the original label of new vertex i
    records: tuple[BandageRecord, ...]

    @property
    def k(self) -> int:
        return len(self.records)

    def to_original(self, v: int) -> int:
        return self.labels[v - 1]


def _bandage_cycles(G: TwoRegularGraph, picks, rank):
    odd = G.odd_cycles()
    if picks is None:
        picks = [min(c, key=rank.__getitem__) for c in odd]
    picks = list(picks)
    owner = {v: c for c in odd for v in c}
    hit = [owner.get(v) for v in picks]
    if None in hit or len(picks) != len(odd) or len({id(c) for c in hit}) != len(odd):
        raise GraphError("picks must choose exactly one vertex from each odd cycle")
    by_pick = dict(zip(picks, hit))
    picks.sort(key=rank.__getitem__)
    new_cycles = [list(c) for c in G.cycles if len(c) % 2 == 0]
    records = []
    for v in picks:
        cyc = list(by_pick[v])
        i = cyc.index(v)
        left, right = cyc[i - 1], cyc[(i + 1) % len(cyc)]
        u, w = (left, right) if rank[left] < rank[right] else (right, left)
        records.append((v, u, (u, w)))
        new_cycles.append(cyc[:i] + cyc[i + 1:])
    return new_cycles, records


def bandage(
    G: TwoRegularGraph, picks: Sequence[int] | None = None, priority: Sequence[int] | None = None
) -> BandagedGraph:
    """Absorb one vertex of each odd cycle into an edge, leaving only even cycles.

    The picked vertex ``v`` is merged into its earlier neighbour ``u``; the
    surviving edge ``u–w`` is the marked edge.  The result is relabelled
    ``1..n-k`` preserving label order.
    """
    rank = _rank(range(1, G.n + 1), priority)
    cycles, records = _bandage_cycles(G, picks, rank)
    kept = sorted(v for c in cycles for v in c)
    new = {old: i + 1 for i, old in enumerate(kept)}
    graph = TwoRegularGraph(len(kept), tuple(tuple(new[v] for v in c) for c in cycles))
    recs = tuple(
        BandageRecord(v, u, tuple(sorted((new[e[0]], new[e[1]])))) for v, u, e in records
    )
    return BandagedGraph(G, graph, tuple(kept), recs)


def _insertions(seq: list[int], lab: list[str], todo: list[tuple[int, str]]) -> Iterator[list[int]]:
    if not todo:
        yield seq
        return
    (v, side), rest = todo[0], todo[1:]
    for i in range(len(seq)):
        if lab[i] != side:
            continue
        yield from _insertions(seq[: i + 1] + [v] + seq[i + 1:], lab[: i + 1] + [side] + lab[i + 1:], rest)


def _bandaged_stream(G: TwoRegularGraph, picks, rank) -> Iterator[CycleOrder]:
    cycles, records = _bandage_cycles(G, picks, rank)
    A0, B0 = _split_cycles(cycles, rank)
    cycle_of = {}
    for c in cycles:
        for x in c:
            cycle_of[x] = c
    for tail in itertools.product("AB", repeat=len(records) - 1):
        want = ("A",) + tail
        A, B = dict(A0), dict(B0)
        for (v, u, (a, b)), side in zip(records, want):
            in_a, in_b = A[a] == b, B[a] == b
            if (side == "A" and not in_a) or (side == "B" and not in_b):
                for x in cycle_of[a]:
                    A[x], B[x] = B[x], A[x]
        todo = [(v, "Q" if side == "A" else "P") for (v, _, _), side in zip(records, want)]
        for P, Q in _pq_pairs(A, B, rank):
            start = min(P, key=rank.__getitem__)
            seq, lab, x, use_p = [start], [], start, True
            while True:
                x = P[x] if use_p else Q[x]
                lab.append("P" if use_p else "Q")
                use_p = not use_p
                if x == start:
                    break
                seq.append(x)
            for full in _insertions(seq, lab, todo):
                yield canonical_cycle(full)


def iter_generate(
    G: TwoRegularGraph, picks: Sequence[int] | None = None, priority: Sequence[int] | None = None
) -> Iterator[CycleOrder]:
    """Lazy stream of distinct compatible cycles for any 2-regular graph."""
    if G.n < 4:
        raise GraphError("need n >= 4")
    if G.is_even:
        yield from iter_generate_even(G, priority)
        return
    rank = _rank(range(1, G.n + 1), priority)
    yield from _unique(_bandaged_stream(G, picks, rank))


def generate(
    G: TwoRegularGraph,
    verify: bool = False,
    picks: Sequence[int] | None = None,
    priority: Sequence[int] | None = None,
    limit: int | None = None,
) -> CompatibleSet:
    """Compatible cycles of ``G`` from the matching construction.

    At least ``(n-2)!/2`` cycles when every cycle of ``G`` is even and at
    least ``(n-2)!/4`` otherwise.  ``limit`` truncates the lazy stream.
    """
    stream = iter_generate(G, picks, priority)
    if limit is not None:
        stream = itertools.islice(stream, limit)
    return _finish(G, stream, verify)


def enumerate_compatible(G: TwoRegularGraph, cap: int = 9, force: bool = False) -> CompatibleSet:
    """Exact set of compatible cycles by checking all ``(n-1)!/2`` cycles."""
    if G.n > cap and not force:
        raise GraphError(f"n={G.n} exceeds the enumeration cap {cap}; pass force=True")
    cycles = tuple(c for c in all_cycles(G.n) if is_compatible(G, c))
    return CompatibleSet(G, cycles, verified=True, bound=theorem_bound(G))
