"""Shared fixtures-by-function for the test suite."""

import random
import time
from contextlib import contextmanager
from functools import lru_cache

from compatcycles.chy import GaugeSingularityError, solve_scattering
from compatcycles.graphs import all_cycles
from compatcycles.kinematics import random_kinematics

CRITERIA = {
    1: "cycle_completions yields (n-2)!! closing matchings, n=4,6,8",
    2: "third_matchings yields >= (n-3)!! verified matchings, 50 pairs at n=4,6,8",
    3: "generate meets the theorem bounds for every labelled graph at n=5,6,7, all verified",
    4: "exact all-bubbles count and Hultman formula vs brute force",
    5: "super Catalan and orthogonal counts vs diagram enumeration, n=4..7",
    6: "|pairing| equals the Feynman sum to 1e-8, exact solution counts",
    7: "monodromy identity residuals below 1e-9 at n=5,6,7",
    8: "expansion round trip to 1e-7 and full-rank compatible bases for n<=6",
    9: "matroid ranks 1,2,6,24 and the Kleiss-Kuijf basis count",
}


@lru_cache(maxsize=None)
def solved(n: int, seed: int, bound: int = 9):
    """Solutions at ``random_kinematics(n, seed, bound=bound)``; ``None`` when the
    point puts a solution at infinity for the default gauge."""
    try:
        return solve_scattering(random_kinematics(n, seed, bound=bound))
    except GaugeSingularityError:
        return None


def solved_points(n: int, count: int, bound: int = 9, start: int = 1):
    out, seed = [], start
    while len(out) < count:
        sols = solved(n, seed, bound)
        if sols is not None:
            out.append(sols)
        seed += 1
    return out


@lru_cache(maxsize=None)
def cycles(n: int):
    return tuple(all_cycles(n))


def rel_err(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


@contextmanager
def time_limit(seconds: float):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, f"took {elapsed:.1f}s, limit {seconds}s"


def rng(seed: int) -> random.Random:
    return random.Random(seed)
