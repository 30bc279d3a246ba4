"""Scattering equations, graph vectors and the bilinear pairing.

Solutions are found in a frame where the first gauge label sits at infinity,
the second at 1 and the third at 0.  There the equations are equivalent to
the polynomial system

    h_m(z) = sum over |S| = m of s(S + {g1}) * prod_{i in S} z_i,   m = 1..n-3,

whose degrees multiply to exactly ``(n-3)!``, so a total-degree homotopy has
no spare paths.  Endpoints are moved to the requested finite gauge by a fixed
Moebius map and polished with Newton's method on the original rational
equations.

The pairing never takes square roots: with ``w_I = 1/det'Phi`` at solution
``I`` and ``v(G)_I`` the product of ``1/(x_a - x_b)`` over the edges of ``G``
(always ``a < b``),

    pairing(G1, G2) = sum_I w_I v(G1)_I v(G2)_I,

which depends on ``G1 ∪ G2`` alone.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ._homotopy import MonomialSystem, PathFailure, Tracker, start_solutions
from .graphs import CycleOrder, Multigraph, TwoRegularGraph, as_multigraph, edge_union
from .kinematics import KinematicPoint, random_kinematics  # noqa: F401  (re-export)


class SolverError(RuntimeError):
    pass


class GaugeSingularityError(SolverError):
    """A solution sits at infinity in the requested finite gauge."""


@dataclass(frozen=True)
class GaugeFixing:
    labels: tuple[int, int, int] = (1, 2, 3)
    values: tuple[complex, complex, complex] = (0.0, 1.0, -1.0)

    def __post_init__(self):
        if len(set(self.labels)) != 3:
            raise ValueError("gauge labels must be distinct")
        v = [complex(x) for x in self.values]
        if len({(x.real, x.imag) for x in v}) != 3:
            raise ValueError("gauge values must be distinct")
        object.__setattr__(self, "values", tuple(v))

    def vandermonde_sq(self) -> complex:
        p1, p2, p3 = self.values
        return ((p1 - p2) * (p2 - p3) * (p3 - p1)) ** 2

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "values": [[v.real, v.imag] for v in self.values]}

    @classmethod
    def from_dict(cls, d: dict) -> "GaugeFixing":
        return cls(tuple(d["labels"]), tuple(complex(re, im) for re, im in d["values"]))


@dataclass(frozen=True)
class SolutionSet:
    kin: KinematicPoint
    gauge: GaugeFixing
    points: np.ndarray            # (n_solutions, n) puncture positions, gauge labels included
    weights: np.ndarray           # (n_solutions,) 1/det'Phi
    residual: float
    tol: float = 1e-12

    @property
    def n(self) -> int:
        return self.kin.n

    def __len__(self):
        return len(self.weights)

    @property
    def free_labels(self) -> list[int]:
        return [a for a in range(1, self.n + 1) if a not in self.gauge.labels]

    @property
    def solutions(self) -> np.ndarray:
        """Free coordinates only, shape ``(n_solutions, n-3)``."""
        return self.points[:, [a - 1 for a in self.free_labels]]

    def max_imag(self) -> float:
        return float(np.abs(self.points.imag).max())

    def all_real(self, tol: float = 1e-9) -> bool:
        return self.max_imag() <= tol * max(1.0, float(np.abs(self.points).max()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "gauge": self.gauge.to_dict(),
            "tol": self.tol,
            "solutions": [[[z.real, z.imag] for z in row] for row in self.solutions],
            "weights": [[w.real, w.imag] for w in self.weights],
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, data: dict, kin: KinematicPoint) -> "SolutionSet":
        gauge = GaugeFixing.from_dict(data["gauge"])
        n = int(data["n"])
        free = [a for a in range(1, n + 1) if a not in gauge.labels]
        pts = np.zeros((len(data["weights"]), n), dtype=complex)
        for lab, val in zip(gauge.labels, gauge.values):
            pts[:, lab - 1] = val
        for i, row in enumerate(data["solutions"]):
            for a, (re, im) in zip(free, row):
                pts[i, a - 1] = complex(re, im)
        w = np.array([complex(re, im) for re, im in data["weights"]])
        return cls(kin, gauge, pts, w, float(data["residual"]), float(data.get("tol", 1e-12)))


# ---------------------------------------------------------------------------
# equations

def _s(kin: KinematicPoint) -> np.ndarray:
    return kin.float_matrix


def equation_values(kin: KinematicPoint, x: np.ndarray) -> np.ndarray:
    """``f_a = sum_b s_ab / (x_a - x_b)`` for every label (index ``a - 1``)."""
    s = _s(kin)
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    terms = s / d
    np.fill_diagonal(terms, 0.0)
    return terms.sum(axis=1)


def relative_residuals(kin: KinematicPoint, x: np.ndarray) -> np.ndarray:
    """``|f_a|`` divided by the sum of the moduli of its terms."""
    s = _s(kin)
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    terms = s / d
    np.fill_diagonal(terms, 0.0)
    return np.abs(terms.sum(axis=1)) / np.maximum(np.abs(terms).sum(axis=1), 1e-300)


def hessian(kin: KinematicPoint, x: np.ndarray) -> np.ndarray:
    """``Phi_ab = s_ab/(x_a-x_b)^2``, ``Phi_aa = -sum_b Phi_ab``."""
    s = _s(kin)
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    phi = s / d ** 2
    np.fill_diagonal(phi, 0.0)
    np.fill_diagonal(phi, -phi.sum(axis=1))
    return phi


def _dg_system(kin: KinematicPoint, gauge: GaugeFixing) -> tuple[MonomialSystem, list[int]]:
    n = kin.n
    g_inf, g_one, g_zero = gauge.labels
    free = [a for a in range(1, n + 1) if a not in gauge.labels]
    pool = free + [g_one]                        # z_{g_zero} = 0 kills any monomial containing it
    masks, sizes, coeff_cols = [], [], []
    for size in range(1, n - 2):
        for S in itertools.combinations(pool, size):
            masks.append([a in S for a in free])
            sizes.append(size)
            coeff_cols.append(float(kin.invariant(S + (g_inf,))))
    masks = np.array(masks, dtype=bool)
    coeffs = np.zeros((n - 3, len(sizes)), dtype=complex)
    for j, (size, c) in enumerate(zip(sizes, coeff_cols)):
        coeffs[size - 1, j] = c
    scale = np.abs(coeffs).max(axis=1, keepdims=True)
    if np.any(scale == 0):
        raise SolverError("degenerate kinematics: an equation vanishes identically")
    return MonomialSystem(masks, coeffs / scale), free


def _mobius_inf_one_zero(gauge: GaugeFixing):
    """Matrix taking (inf, 1, 0) to the gauge values, in homogeneous coordinates."""
    p1, p2, p3 = gauge.values
    # columns are images of [1:0] and [0:1] scaled so that [1:1] -> p2
    A = np.array([[p1, p3], [1.0, 1.0]], dtype=complex)
    lam = np.linalg.solve(A, np.array([p2, 1.0], dtype=complex))
    return np.array([[lam[0] * p1, lam[1] * p3], [lam[0], lam[1]]])


def _polish(kin: KinematicPoint, gauge: GaugeFixing, x: np.ndarray, iters: int = 30) -> np.ndarray:
    free = [a - 1 for a in range(1, kin.n + 1) if a not in gauge.labels]
    for _ in range(iters):
        f = equation_values(kin, x)[free]
        J = hessian(kin, x)[np.ix_(free, free)]
        dx = np.linalg.solve(J, -f)
        x = x.copy()
        x[free] += dx
        if np.linalg.norm(dx) <= 1e-16 * (1 + np.linalg.norm(x)):
            break
    return x


def reduced_weight(kin: KinematicPoint, gauge: GaugeFixing, x: np.ndarray) -> complex:
    """``1/det'Phi``: gauge rows and columns removed, divided by the squared
    Vandermonde factor of the gauge coordinates."""
    free = [a - 1 for a in range(1, kin.n + 1) if a not in gauge.labels]
    det = np.linalg.det(hessian(kin, x)[np.ix_(free, free)])
    if det == 0 or not np.isfinite(det):
        raise SolverError("singular reduced Hessian (non-generic kinematics)")
    return complex(gauge.vandermonde_sq() / det)


def solve_scattering(
    kin: KinematicPoint,
    gauge: GaugeFixing | None = None,
    tol: float = 1e-12,
    seed: int = 0,
    separation: float = 1e-8,
    max_attempts: int = 6,
    allow_large: bool = False,
) -> SolutionSet:
    """All ``(n-3)!`` solutions of the scattering equations in the given gauge."""
    gauge = gauge or GaugeFixing()
    n = kin.n
    if n < 4:
        raise SolverError("need n >= 4")
    if n > 7 and not allow_large:
        raise SolverError(f"n={n} solve is long-running; pass allow_large=True")
    if n > 8:
        raise SolverError("n >= 9 is not supported")
    if any(not 1 <= a <= n for a in gauge.labels):
        raise SolverError("gauge labels out of range")
    expected = math.factorial(n - 3)
    system, free = _dg_system(kin, gauge)
    M = _mobius_inf_one_zero(gauge)
    rng = np.random.default_rng(seed)
    found: list[np.ndarray] = []
    at_infinity = 0

    def distinct(x):
        xs = x[[a - 1 for a in free]]
        return all(
            np.linalg.norm(xs - y[[a - 1 for a in free]]) > separation * (1 + np.linalg.norm(xs))
            for y in found
        )

    for _ in range(max_attempts):
        gamma = np.exp(2j * np.pi * rng.random())
        tracker = Tracker(system, gamma)
        for y0 in start_solutions(system.degrees()):
            try:
                z = tracker.track(y0)
            except (PathFailure, np.linalg.LinAlgError):
                continue
            x = np.empty(n, dtype=complex)
            for lab, val in zip(gauge.labels, gauge.values):
                x[lab - 1] = val
            num = M[0, 0] * z + M[0, 1]
            den = M[1, 0] * z + M[1, 1]
            if np.any(np.abs(den) <= 1e-10 * np.abs(num)):
                at_infinity += 1
                continue
            x[[a - 1 for a in free]] = num / den
            try:
                x = _polish(kin, gauge, x)
            except np.linalg.LinAlgError:
                continue
            if relative_residuals(kin, x).max() > tol or not np.all(np.isfinite(x)):
                continue
            if distinct(x):
                found.append(x)
        if len(found) >= expected:
            break
    if len(found) != expected and at_infinity:
        raise GaugeSingularityError(
            f"{at_infinity} tracked endpoints sit at infinity once labels {gauge.labels} are pinned; "
            "this point is not generic for the chosen gauge"
        )
    if len(found) != expected:
        raise SolverError(f"found {len(found)} distinct solutions, expected {expected}")
    found.sort(key=lambda x: tuple(np.round(np.concatenate([x.real, x.imag]), 9)))
    points = np.array(found)
    weights = np.array([reduced_weight(kin, gauge, x) for x in points])
    residual = float(max(relative_residuals(kin, x).max() for x in points))
    return SolutionSet(kin, gauge, points, weights, residual, tol)


# ---------------------------------------------------------------------------
# graph vectors and pairing

def _edge_factors(mg: Multigraph, points: np.ndarray) -> np.ndarray:
    """``prod_e 1/(x_a - x_b)`` per solution, edges in the multigraph's sorted order."""
    edges = mg.edge_list()
    a = np.array([e[0] - 1 for e in edges])
    b = np.array([e[1] - 1 for e in edges])
    return np.prod(1.0 / (points[:, a] - points[:, b]), axis=1)


def graph_vector(G, sols: SolutionSet) -> np.ndarray:
    """Components ``v(G)_I``, one per solution (weights not included)."""
    mg = as_multigraph(G)
    if mg.n != sols.n:
        raise ValueError("graph and solutions have different n")
    return _edge_factors(mg, sols.points)


def pairing(G1, G2, sols: SolutionSet) -> complex:
    """``sum_I w_I v(G1)_I v(G2)_I``, evaluated on the union multigraph."""
    H = edge_union(G1, G2)
    if H.n != sols.n:
        raise ValueError("graphs and solutions have different n")
    return pairing_of_union(H, sols)


def pairing_of_union(H: Multigraph, sols: SolutionSet) -> complex:
    terms = sols.weights * _edge_factors(H, sols.points)
    return complex(np.sum(terms))


def _monodromy_terms(sols: SolutionSet, A: Sequence[int], a: int, b: int):
    n = sols.n
    A = sorted(set(A))
    Ac = [d for d in range(1, n + 1) if d not in A]
    if not 2 <= len(A) <= n - 2:
        raise ValueError("need 2 <= |A| <= n-2")
    if a not in A or b in A:
        raise ValueError("need a in A and b outside A")
    pairs = [(c, d) for c in A for d in Ac if c != a and d != b]
    return A, pairs, _s(sols.kin)


def monodromy_residual(sols: SolutionSet, A: Sequence[int], a: int, b: int) -> np.ndarray:
    """``|1 + (1/s_A) sum_{c in A, d not in A} s_cd (x_c-x_a)(x_d-x_b) / ((x_c-x_d)(x_a-x_b))|`` per solution.

    Terms with ``c = a`` or ``d = b`` vanish.  In the frame ``x_b = inf`` the
    sum is ``sum_{c in A} (x_c - x_a) E_c`` with ``E_c`` the scattering
    equation of ``c``, which is why the identity holds on solutions.
    """
    A, pairs, s = _monodromy_terms(sols, A, a, b)
    s_A = float(sols.kin.invariant(A))
    if s_A == 0:
        raise ValueError(f"s_A vanishes for A={A}")
    X = sols.points.T
    total = np.zeros(len(sols), dtype=complex)
    for c, d in pairs:
        total += s[c - 1, d - 1] * (X[c - 1] - X[a - 1]) * (X[d - 1] - X[b - 1]) / (
            (X[c - 1] - X[d - 1]) * (X[a - 1] - X[b - 1]))
    return np.abs(1.0 + total / s_A)


def printed_monodromy_residual(sols: SolutionSet, A: Sequence[int], a: int, b: int) -> np.ndarray:
    """The same residual for the variant without ``1/s_A`` and with cross ratio
    ``(x_a-x_c)(x_d-x_b) / ((x_b-x_c)(x_a-x_d))``.  It does not vanish on
    solutions; it is kept so the discrepancy stays measurable."""
    A, pairs, s = _monodromy_terms(sols, A, a, b)
    X = sols.points.T
    total = np.zeros(len(sols), dtype=complex)
    for c, d in pairs:
        total += s[c - 1, d - 1] * (X[a - 1] - X[c - 1]) * (X[d - 1] - X[b - 1]) / (
            (X[b - 1] - X[c - 1]) * (X[a - 1] - X[d - 1]))
    return np.abs(1.0 + total)


# ---------------------------------------------------------------------------
# caching

def cache_key(kin: KinematicPoint, gauge: GaugeFixing, tol: float) -> str:
    import hashlib

    blob = json.dumps({"kin": kin.digest(), "gauge": gauge.to_dict(), "tol": tol}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def default_cache_dir() -> Path | None:
    d = os.environ.get("COMPATCYCLES_CACHE_DIR")
    return Path(d) if d else None


def cached_solve(kin: KinematicPoint, gauge: GaugeFixing | None = None, tol: float = 1e-12,
                 seed: int = 0, cache_dir: Path | None = None, **kwargs) -> SolutionSet:
    """``solve_scattering`` with an on-disk JSON cache keyed by kinematics, gauge and tol."""
    gauge = gauge or GaugeFixing()
    if cache_dir is None:
        return solve_scattering(kin, gauge, tol=tol, seed=seed, **kwargs)
    cache_dir = Path(cache_dir)
    path = cache_dir / f"sols-{cache_key(kin, gauge, tol)}.json"
    if path.exists():
        return SolutionSet.from_dict(json.loads(path.read_text()), kin)
    sols = solve_scattering(kin, gauge, tol=tol, seed=seed, **kwargs)
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(sols.to_dict(), sort_keys=True))
    os.replace(tmp, path)
    return sols
