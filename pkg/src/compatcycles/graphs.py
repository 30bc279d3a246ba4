"""Multigraphs, 2-regular graphs, matchings and cycle orderings.

Vertices are the integers ``1..n``.  Graphs are loopless but may carry
parallel edges; a double edge between two vertices of a 2-regular graph is a
cycle of length two (a *bubble*).
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graphs, orderings or graph notation."""


def _edge(a: int, b: int) -> Edge:
    if a == b:
        raise GraphError(f"loop at vertex {a}")
    return (a, b) if a < b else (b, a)


def _cycle_edges(seq: Sequence[int]) -> list[Edge]:
    k = len(seq)
    return [_edge(seq[i], seq[(i + 1) % k]) for i in range(k)]


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph stored as a sorted ``(a, b, multiplicity)`` table."""

    n: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        prev = None
        for a, b, m in self.edges:
            if not 1 <= a < b <= self.n:
                raise GraphError(f"edge {(a, b)} invalid on {self.n} vertices")
            if m < 1:
                raise GraphError(f"edge {(a, b)} has multiplicity {m}")
            if prev is not None and (a, b) <= prev:
                raise GraphError("edge table must be strictly sorted")
            prev = (a, b)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Multigraph":
        counts = Counter(_edge(int(a), int(b)) for a, b in edges)
        return cls(n, tuple((a, b, m) for (a, b), m in sorted(counts.items())))

    @cached_property
    def _table(self) -> dict[Edge, int]:
        return {(a, b): m for a, b, m in self.edges}

    def multiplicity(self, a: int, b: int) -> int:
        return self._table.get(_edge(a, b), 0)

    def counter(self) -> Counter:
        return Counter(self._table)

    def edge_list(self) -> list[Edge]:
        """All edges, repeated according to multiplicity, in sorted order."""
        return [(a, b) for a, b, m in self.edges for _ in range(m)]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * (self.n + 1)
        for a, b, m in self.edges:
            deg[a] += m
            deg[b] += m
        return tuple(deg[1:])

    def degree(self, v: int) -> int:
        return self.degrees[v - 1]

    def is_regular(self, k: int) -> bool:
        return all(d == k for d in self.degrees)

    def relabel(self, perm: dict[int, int]) -> "Multigraph":
        return Multigraph.from_edges(
            self.n, ((perm[a], perm[b]) for a, b in self.edge_list())
        )

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [[a, b, m] for a, b, m in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Multigraph":
        n = int(data["n"])
        edges = []
        for a, b, m in data["edges"]:
            edges.extend([(a, b)] * int(m))
        return cls.from_edges(n, edges)


def _orient_cycle(cyc: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the minimum label, then step toward the smaller neighbour."""
    i = cyc.index(min(cyc))
    rot = tuple(cyc[i:]) + tuple(cyc[:i])
    if len(rot) > 2 and rot[-1] < rot[1]:
        rot = (rot[0],) + rot[:0:-1]
    return rot


@dataclass(frozen=True)
class TwoRegularGraph:
    """A disjoint union of cycles covering ``1..n``.

    ``cycles`` is kept canonical: each cycle starts at its minimum label and
    proceeds toward the smaller of its two neighbours; cycles are sorted by
    their minimum label.
    """

    n: int
    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = [c for cyc in self.cycles for c in cyc]
        if sorted(seen) != list(range(1, self.n + 1)):
            raise GraphError(f"cycles must use each label 1..{self.n} exactly once")
        if any(len(c) < 2 for c in self.cycles):
            raise GraphError("cycles must have length at least 2")
        canon = tuple(sorted(_orient_cycle(c) for c in self.cycles))
        object.__setattr__(self, "cycles", canon)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None):
        cycles = [tuple(int(v) for v in c) for c in cycles]
        if n is None:
            n = sum(len(c) for c in cycles)
        return cls(n, tuple(cycles))

    @classmethod
    def from_multigraph(cls, mg: Multigraph) -> "TwoRegularGraph":
        if not mg.is_regular(2):
            raise GraphError("multigraph is not 2-regular")
        remaining = mg.counter()
        adj: dict[int, list[int]] = {v: [] for v in range(1, mg.n + 1)}
        for a, b in mg.edge_list():
            adj[a].append(b)
            adj[b].append(a)
        cycles, seen = [], set()
        for start in range(1, mg.n + 1):
            if start in seen:
                continue
            cyc, v = [start], start
            seen.add(start)
            while True:
                nxt = next(w for w in adj[v] if remaining[_edge(v, w)] > 0)
                remaining[_edge(v, nxt)] -= 1
                if nxt == start:
                    break
                cyc.append(nxt)
                seen.add(nxt)
                v = nxt
            cycles.append(tuple(cyc))
        return cls(mg.n, tuple(cycles))

    @cached_property
    def multigraph(self) -> Multigraph:
        return Multigraph.from_edges(self.n, self.edges())

    def edges(self) -> list[Edge]:
        return [e for cyc in self.cycles for e in _cycle_edges(cyc)]

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles), reverse=True))

    @property
    def is_even(self) -> bool:
        return all(len(c) % 2 == 0 for c in self.cycles)

    def odd_cycles(self) -> list[tuple[int, ...]]:
        return [c for c in self.cycles if len(c) % 2]

    def relabel(self, perm: dict[int, int]) -> "TwoRegularGraph":
        return TwoRegularGraph(self.n, tuple(tuple(perm[v] for v in c) for c in self.cycles))

    def notation(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)

    def __str__(self) -> str:
        return self.notation()


@dataclass(frozen=True, order=True)
class CycleOrder:
    """Canonical representative of a hamiltonian cycle (``order[0] == 1``,
    ``order[1] < order[-1]``)."""

    order: tuple[int, ...]

    def __post_init__(self):
        o = self.order
        if len(o) < 3 or sorted(o) != list(range(1, len(o) + 1)):
            raise GraphError(f"{o} is not a permutation of 1..n with n >= 3")
        if o[0] != 1 or o[1] > o[-1]:
            raise GraphError(f"{o} is not canonical; use canonical_cycle()")

    @property
    def n(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __len__(self):
        return len(self.order)

    def edges(self) -> list[Edge]:
        return _cycle_edges(self.order)

    def as_graph(self) -> TwoRegularGraph:
        return TwoRegularGraph(self.n, (self.order,))

    @property
    def multigraph(self) -> Multigraph:
        return Multigraph.from_edges(self.n, self.edges())

    def relabel(self, perm: dict[int, int]) -> "CycleOrder":
        return canonical_cycle([perm[v] for v in self.order])

    def __str__(self) -> str:
        return " ".join(map(str, self.order))


@dataclass(frozen=True)
class PerfectMatching:
    """1-regular graph on an even vertex set (not necessarily ``1..n``)."""

    pairs: tuple[Edge, ...]
    mate: dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pairs = tuple(sorted(_edge(a, b) for a, b in self.pairs))
        mate: dict[int, int] = {}
        for a, b in pairs:
            if a in mate or b in mate:
                raise GraphError(f"vertex repeated in matching {pairs}")
            mate[a], mate[b] = b, a
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "mate", mate)

    @classmethod
    def from_mate(cls, mate: dict[int, int]) -> "PerfectMatching":
        return cls(tuple({_edge(a, b) for a, b in mate.items()}))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.mate))

    @property
    def n(self) -> int:
        return len(self.mate)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __str__(self) -> str:
        return "{" + ",".join(f"{a}{b}" if max(a, b) < 10 else f"{a}-{b}" for a, b in self.pairs) + "}"


# ---------------------------------------------------------------------------
# parsing and canonical forms

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _labels(chunk: str) -> list[int]:
    toks = [t for t in re.split(r"[\s,]+", chunk.strip()) if t]
    try:
        return [int(t) for t in toks]
    except ValueError as exc:
        raise GraphError(f"bad label in {chunk!r}") from exc


def parse_graph(text: str, n: int | None = None) -> TwoRegularGraph:
    """Parse cycle notation such as ``"(1 2)(3 4 5)"``.

    A cycle of length two becomes a double edge.  When ``n`` is omitted it is
    taken to be the number of labels.
    """
    stripped = _CYCLE_RE.sub("", text)
    if stripped.strip():
        raise GraphError(f"malformed graph notation {text!r}")
    cycles = [_labels(m) for m in _CYCLE_RE.findall(text)]
    if not cycles:
        raise GraphError(f"no cycles in {text!r}")
    for c in cycles:
        if len(c) < 2:
            raise GraphError(f"cycle {c} has length < 2")
    labels = [v for c in cycles for v in c]
    if n is None:
        n = len(labels)
    dup = [v for v, k in Counter(labels).items() if k > 1]
    if dup:
        raise GraphError(f"duplicate labels {sorted(dup)}")
    missing = set(range(1, n + 1)) - set(labels)
    extra = set(labels) - set(range(1, n + 1))
    if missing or extra:
        raise GraphError(f"labels must be exactly 1..{n} (missing {sorted(missing)}, extra {sorted(extra)})")
    return TwoRegularGraph(n, tuple(tuple(c) for c in cycles))


def parse_cycle(text: str) -> CycleOrder:
    """Parse ``"1 3 2 4"`` (optionally parenthesised or comma separated)."""
    return canonical_cycle(_labels(text.replace("(", " ").replace(")", " ")))


def canonical_cycle(seq: Sequence[int]) -> CycleOrder:
    seq = [int(v) for v in seq]
    n = len(seq)
    if n < 3 or sorted(seq) != list(range(1, n + 1)):
        raise GraphError(f"{seq} is not a permutation of 1..n with n >= 3")
    i = seq.index(1)
    rot = seq[i:] + seq[:i]
    if rot[1] > rot[-1]:
        rot = [rot[0]] + rot[:0:-1]
    return CycleOrder(tuple(rot))


def cycle_from_edges(n: int, edges: Iterable[Edge]) -> CycleOrder | None:
    """Return the hamiltonian cycle formed by ``edges`` or ``None`` if they are not one."""
    edges = list(edges)
    if len(edges) != n:
        return None
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for a, b in edges:
        if a == b or a not in adj or b not in adj:
            return None
        adj[a].append(b)
        adj[b].append(a)
    if any(len(nb) != 2 for nb in adj.values()):
        return None
    if n >= 3 and any(nb[0] == nb[1] for nb in adj.values()):
        return None
    order, prev, v = [1], None, 1
    while True:
        a, b = adj[v]
        nxt = b if a == prev else a
        if nxt == 1:
            break
        if len(order) == n:
            return None
        order.append(nxt)
        prev, v = v, nxt
    return canonical_cycle(order) if len(order) == n else None


def all_cycles(n: int) -> Iterator[CycleOrder]:
    """All ``(n-1)!/2`` canonical cycles on ``1..n`` in lexicographic order."""
    if n < 3:
        raise GraphError("need n >= 3")
    for perm in itertools.permutations(range(2, n + 1)):
        if perm[0] < perm[-1]:
            yield CycleOrder((1,) + perm)


def as_multigraph(obj) -> Multigraph:
    if isinstance(obj, Multigraph):
        return obj
    if isinstance(obj, (TwoRegularGraph, CycleOrder)):
        return obj.multigraph
    if isinstance(obj, PerfectMatching):
        return Multigraph.from_edges(max(obj.mate), obj.pairs)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a multigraph")


def edge_union(g1, g2) -> Multigraph:
    """Edge-disjoint union: multiplicities add."""
    m1, m2 = as_multigraph(g1), as_multigraph(g2)
    if m1.n != m2.n:
        raise GraphError(f"vertex counts differ ({m1.n} vs {m2.n})")
    return Multigraph.from_edges(m1.n, m1.edge_list() + m2.edge_list())


# ---------------------------------------------------------------------------
# hamiltonian decompositions

def _adjacency(H: Multigraph) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in range(1, H.n + 1)}
    for a, b, _ in H.edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _hamiltonian_cycles(H: Multigraph) -> Iterator[list[int]]:
    """Walks ``1 -> ... -> 1`` that visit every vertex once (each cycle twice, once per direction)."""
    n = H.n
    adj = _adjacency(H)
    avail = H.counter()
    path, on_path = [1], [False] * (n + 1)
    on_path[1] = True

    def dfs(v: int):
        if len(path) == n:
            if avail[_edge(v, 1)] > 0:
                yield list(path)
            return
        for w in adj[v]:
            if on_path[w]:
                continue
            e = _edge(v, w)
            if avail[e] == 0:
                continue
            avail[e] -= 1
            on_path[w] = True
            path.append(w)
            yield from dfs(w)
            path.pop()
            on_path[w] = False
            avail[e] += 1

    yield from dfs(1)


def _decompositions(H: Multigraph) -> Iterator[tuple[CycleOrder, CycleOrder]]:
    full = H.counter()
    for walk in _hamiltonian_cycles(H):
        used = Counter(_cycle_edges(walk))
        rest = full - used
        other = cycle_from_edges(H.n, rest.elements())
        if other is not None:
            yield canonical_cycle(walk), other


def hamiltonian_decompositions(H: Multigraph) -> list[tuple[CycleOrder, CycleOrder]]:
    """Every unordered pair of hamiltonian cycles whose edge-disjoint union is ``H``."""
    H = as_multigraph(H)
    if not H.is_regular(4):
        raise GraphError("hamiltonian_decompositions needs a 4-regular multigraph")
    pairs = {tuple(sorted(p)) for p in _decompositions(H)}
    return sorted(pairs)


def find_decomposition(H: Multigraph) -> tuple[CycleOrder, CycleOrder] | None:
    """First hamiltonian decomposition found, or ``None``."""
    H = as_multigraph(H)
    if not H.is_regular(4):
        raise GraphError("find_decomposition needs a 4-regular multigraph")
    return next(_decompositions(H), None)


def is_compatible(G: TwoRegularGraph, C: CycleOrder) -> bool:
    """True iff ``G ∪ C`` splits into two hamiltonian cycles."""
    if G.n != C.n:
        raise GraphError(f"vertex counts differ ({G.n} vs {C.n})")
    return find_decomposition(edge_union(G, C)) is not None


def two_factors(H: Multigraph) -> Iterator[Multigraph]:
    """All spanning 2-regular sub-multigraphs of ``H`` (as edge multisets)."""
    H = as_multigraph(H)
    items = list(H.edges)
    n = H.n
    need = [0] + [2] * n
    # suffix capacity per vertex, for pruning
    cap_after = [[0] * (n + 1) for _ in range(len(items) + 1)]
    for i in range(len(items) - 1, -1, -1):
        cap_after[i] = list(cap_after[i + 1])
        a, b, m = items[i]
        cap_after[i][a] += m
        cap_after[i][b] += m
    chosen: list[int] = [0] * len(items)

    def rec(i: int):
        if i == len(items):
            if not any(need):
                yield Multigraph(n, tuple((a, b, k) for (a, b, _), k in zip(items, chosen) if k))
            return
        a, b, m = items[i]
        for k in range(min(m, need[a], need[b]), -1, -1):
            need[a] -= k
            need[b] -= k
            if need[a] <= cap_after[i + 1][a] and need[b] <= cap_after[i + 1][b]:
                chosen[i] = k
                yield from rec(i + 1)
            need[a] += k
            need[b] += k
        chosen[i] = 0

    yield from rec(0)


def is_compatible_graph(G: TwoRegularGraph, B: TwoRegularGraph) -> bool:
    """Relaxed compatibility: ``B`` and both parts of the split have one or two cycles."""
    if isinstance(B, CycleOrder):
        B = B.as_graph()
    if G.n != B.n:
        raise GraphError(f"vertex counts differ ({G.n} vs {B.n})")
    if len(B.cycles) > 2:
        raise GraphError("a compatible graph has one or two cycles")
    H = edge_union(G, B)
    full = H.counter()
    for part in two_factors(H):
        rest = full - part.counter()
        p1 = TwoRegularGraph.from_multigraph(part)
        p2 = TwoRegularGraph.from_multigraph(
            Multigraph(H.n, tuple((a, b, m) for (a, b), m in sorted(rest.items())))
        )
        if len(p1.cycles) <= 2 and len(p2.cycles) <= 2:
            return True
    return False


def cycle_type_partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of ``n`` into parts >= 2, largest part first."""
    out: list[tuple[int, ...]] = []

    def rec(rest: int, cap: int, acc: list[int]):
        if rest == 0:
            out.append(tuple(acc))
            return
        for p in range(min(rest, cap), 1, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return out


def graph_of_type(parts: Sequence[int]) -> TwoRegularGraph:
    """Graph with consecutive labels per cycle, e.g. ``(3, 2) -> (1 2 3)(4 5)``."""
    cycles, start = [], 1
    for p in parts:
        cycles.append(tuple(range(start, start + p)))
        start += p
    return TwoRegularGraph(start - 1, tuple(cycles))


def bubbles_graph(n: int) -> TwoRegularGraph:
    if n % 2:
        raise GraphError("all-bubbles graph needs even n")
    return graph_of_type([2] * (n // 2))


def random_two_regular(n: int, rng) -> TwoRegularGraph:
    """Random cycle type and random labels; ``rng`` is a ``random.Random``."""
    parts = rng.choice(cycle_type_partitions(n))
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    cycles, i = [], 0
    for p in parts:
        cycles.append(tuple(labels[i:i + p]))
        i += p
    return TwoRegularGraph(n, tuple(cycles))


def all_two_regular(n: int) -> Iterator[TwoRegularGraph]:
    """Every labelled 2-regular multigraph on ``1..n`` (bubbles allowed)."""

    def cycles_through(block: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        head, rest = block[0], block[1:]
        if not rest:
            return
        if len(rest) == 1:
            yield block
            return
        for p in itertools.permutations(rest):
            if p[0] < p[-1]:
                yield (head,) + p

    def rec(left: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not left:
            yield []
            return
        v, others = left[0], left[1:]
        for k in range(1, len(others) + 1):
            for mates in itertools.combinations(others, k):
                remaining = tuple(x for x in others if x not in mates)
                if len(remaining) == 1:
                    continue
                for cyc in cycles_through((v,) + mates):
                    for tail in rec(remaining):
                        yield [cyc] + tail

    for cycles in rec(tuple(range(1, n + 1))):
        yield TwoRegularGraph(n, tuple(cycles))
