"""Expanding graph vectors in a basis of cycles, and numerical rank probes.

The expansion of ``v(G)`` in a cycle basis ``{C_a}`` is found from probe
cycles ``C_b`` compatible with ``G``: each probe turns ``pairing(G, C_b)``
into a cycle-cycle pairing ``pairing(C1, C2)`` through a hamiltonian
decomposition ``G ∪ C_b = C1 ∪ C2``, giving the linear system

    pairing(C1, C2) = sum_a c_a pairing(C_a, C_b).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .chy import SolutionSet, graph_vector, pairing
from .compat import enumerate_compatible, iter_generate
from .graphs import CycleOrder, GraphError, TwoRegularGraph, canonical_cycle, edge_union, find_decomposition


class IncompatibleProbeError(ValueError):
    def __init__(self, probe: CycleOrder):
        super().__init__(f"probe {probe} is not a compatible cycle")
        self.probe = probe


class RankDeficientError(np.linalg.LinAlgError):
    def __init__(self, rank: int, needed: int, condition: float):
        super().__init__(f"probe matrix has numerical rank {rank} < {needed} (condition {condition:.3g})")
        self.rank = rank
        self.needed = needed
        self.condition = condition


@dataclass(frozen=True)
class CycleBasis:
    orderings: tuple[CycleOrder, ...]
    kind: str = "custom"

    @property
    def n(self) -> int:
        return self.orderings[0].n

    def __len__(self):
        return len(self.orderings)

    def __iter__(self):
        return iter(self.orderings)


def standard_basis(n: int) -> CycleBasis:
    """``(gamma, n-2, n-1, n)`` for every permutation ``gamma`` of ``1..n-3``."""
    if n < 4:
        raise GraphError("standard_basis needs n >= 4")
    tail = (n - 2, n - 1, n)
    orders = tuple(canonical_cycle(g + tail) for g in itertools.permutations(range(1, n - 2)))
    return CycleBasis(orders, kind="standard")


def kleiss_kuijf_orderings(n: int) -> list[CycleOrder]:
    """Orderings ``(1, 2, omega)`` with ``omega`` a permutation of ``3..n``."""
    return [CycleOrder((1, 2) + w) for w in itertools.permutations(range(3, n + 1))]


def amplitude_table(basis: Sequence[CycleOrder], sols: SolutionSet, others: Sequence[CycleOrder] | None = None) -> np.ndarray:
    """``T[i, j] = pairing(basis[i], others[j])`` (``others`` defaults to ``basis``)."""
    others = basis if others is None else others
    V = np.array([graph_vector(c, sols) for c in basis])
    W = np.array([graph_vector(c, sols) for c in others])
    return (V * sols.weights) @ W.T


@dataclass(frozen=True)
class ExpansionResult:
    graph: TwoRegularGraph
    basis: CycleBasis
    probes: tuple[CycleOrder, ...]
    coefficients: np.ndarray
    condition: float
    residual: float
    reproduction_error: float
    rank: int
    decompositions: tuple[tuple[CycleOrder, CycleOrder], ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.notation(),
            "basis": [str(c) for c in self.basis],
            "probes": [str(c) for c in self.probes],
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "condition": self.condition,
            "residual": self.residual,
            "reproduction_error": self.reproduction_error,
            "rank": self.rank,
        }


def expansion_coefficients(
    G: TwoRegularGraph,
    basis: CycleBasis,
    probes: Iterable[CycleOrder],
    sols: SolutionSet,
    rank_tol: float = 1e-9,
) -> ExpansionResult:
    """Solve for ``c`` with ``v(G) = sum_a c_a v(C_a)`` using compatible probes only."""
    probes = tuple(probes)
    needed = len(basis)
    if len(probes) < needed:
        raise RankDeficientError(len(probes), needed, math.inf)
    decomps = []
    for p in probes:
        d = find_decomposition(edge_union(G, p))
        if d is None:
            raise IncompatibleProbeError(p)
        decomps.append(d)
    rhs = np.array([pairing(c1, c2, sols) for c1, c2 in decomps])
    M = amplitude_table(list(basis), sols, list(probes)).T   # rows: probes, cols: basis
    # columns that vanish to roundoff (orthogonal pairs) must not be blown up
    scale = np.linalg.norm(M, axis=0)
    scale = np.maximum(scale, 1e-6 * scale.max()) if scale.max() > 0 else np.ones_like(scale)
    Ms = M / scale
    sv = np.linalg.svd(Ms, compute_uv=False)
    rank = int(np.sum(sv > rank_tol * sv[0]))
    condition = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if rank < needed:
        raise RankDeficientError(rank, needed, condition)
    y, *_ = np.linalg.lstsq(Ms, rhs, rcond=None)
    coeffs = y / scale
    residual = float(np.linalg.norm(M @ coeffs - rhs) / max(np.linalg.norm(rhs), 1e-300))
    vG = graph_vector(G, sols)
    V = np.array([graph_vector(c, sols) for c in basis])
    repro = float(np.linalg.norm(coeffs @ V - vG) / np.linalg.norm(vG))
    return ExpansionResult(G, basis, probes, coeffs, condition, residual, repro, rank, tuple(decomps))


def reconstruct_pairing(G1, G2, e1: ExpansionResult, e2: ExpansionResult, amp: np.ndarray) -> complex:
    """``sum_{a,b} c1_a c2_b m(a|b)`` from two expansions over the same basis."""
    if e1.basis != e2.basis:
        raise ValueError("expansions use different bases")
    if G1 != e1.graph or G2 != e2.graph:
        raise ValueError("expansions do not belong to the given graphs")
    if amp.shape != (len(e1.basis), len(e1.basis)):
        raise ValueError("amplitude table does not match the basis")
    return complex(e1.coefficients @ amp @ e2.coefficients)


# ---------------------------------------------------------------------------
# rank

@dataclass(frozen=True)
class RankReport:
    items: tuple[str, ...]
    rank: int
    tolerance: float
    singular_values: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "items": list(self.items),
            "count": len(self.items),
            "rank": self.rank,
            "tolerance": self.tolerance,
            "singular_values": list(self.singular_values),
        }


def _unit_rows(items, sols: SolutionSet) -> np.ndarray:
    # per-solution rescaling leaves every rank unchanged but evens out conditioning
    V = np.array([graph_vector(it, sols) for it in items])
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def numerical_rank(items: Sequence, sols: SolutionSet, tol: float = 1e-9) -> RankReport:
    """Rank of the component vectors (rows normalised; weights are a common nonzero scaling)."""
    items = list(items)
    if not items:
        raise ValueError("numerical_rank needs at least one item")
    sv = np.linalg.svd(_unit_rows(items, sols), compute_uv=False)
    rank = int(np.sum(sv > tol * sv[0]))
    return RankReport(tuple(str(i) for i in items), rank, tol, tuple(float(x) for x in sv))


def count_full_rank_subsets(items: Sequence, sols: SolutionSet, k: int | None = None,
                            tol: float = 1e-9, chunk: int = 20000) -> int:
    """Number of ``k``-subsets of ``items`` whose vectors have full rank ``k``."""
    V = _unit_rows(list(items), sols)
    k = V.shape[1] if k is None else k
    total = 0
    combos = itertools.combinations(range(len(V)), k)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        sv = np.linalg.svd(V[np.array(block)], compute_uv=False)
        total += int(np.sum(sv[:, -1] > tol * sv[:, 0]))
    return total


@dataclass(frozen=True)
class BasisSearch:
    graph: TwoRegularGraph
    cycles: tuple[CycleOrder, ...]
    rank: int
    target: int
    examined: int
    source: str

    @property
    def complete(self) -> bool:
        return self.rank >= self.target

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.notation(),
            "complete": self.complete,
            "rank": self.rank,
            "target": self.target,
            "examined": self.examined,
            "source": self.source,
            "cycles": [str(c) for c in self.cycles],
        }


def find_compatible_basis(G: TwoRegularGraph, sols: SolutionSet, tol: float = 1e-9,
                          shuffle_seed: int | None = None) -> BasisSearch:
    """Greedily pick compatible cycles that raise the rank until it reaches ``(n-3)!``.

    Candidates come from the construction first, then from exhaustive
    enumeration.  Falling short is reported, not raised.
    """
    if G.n > 8:
        raise GraphError("find_compatible_basis supports n <= 8")
    target = math.factorial(G.n - 3)
    chosen: list[CycleOrder] = []
    rows: list[np.ndarray] = []
    examined, source = 0, "generate"

    def candidates():
        nonlocal source
        gen = list(iter_generate(G))
        if shuffle_seed is not None:
            random.Random(shuffle_seed).shuffle(gen)
        yield from gen
        source = "enumerate"
        seen = set(gen)
        yield from (c for c in enumerate_compatible(G, force=True) if c not in seen)

    for c in candidates():
        examined += 1
        v = graph_vector(c, sols)
        v = v / np.linalg.norm(v)
        trial = np.array(rows + [v])
        sv = np.linalg.svd(trial, compute_uv=False)
        if np.sum(sv > tol * sv[0]) > len(rows):
            rows.append(v)
            chosen.append(c)
            if len(chosen) == target:
                break
    return BasisSearch(G, tuple(chosen), len(chosen), target, examined, source)
