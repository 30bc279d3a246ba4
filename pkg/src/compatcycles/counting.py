"""Exact enumerative formulas, with brute-force counterparts.

Everything here is integer or ``Fraction`` arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import factorial

from .compat import _all_matchings, _is_single_cycle, double_factorial


def _T(a: int, b: int, s: int) -> Fraction:
    num = (
        Fraction(2) ** (3 * (a - b) - 1)
        * (2 * a - 2 * b + 1)
        * factorial(a - 1)
        * (factorial(2 * b) * factorial(a - 1) * factorial(s - a - b + 1)) ** 2
    )
    den = (
        (s * s - (a - b + 1) ** 2)
        * (s * s - (a - b) ** 2)
        * factorial(s - a - b)
        * factorial(2 * a - 1)
        * factorial(b - 1)
        * ((2 * b - 1) * factorial(b)) ** 2
    )
    return num / den


def hultman_formula(s: int) -> int:
    """Signed Hultman number ``S_H(s-1, 1)``: signed permutations of ``s-1``
    elements whose breakpoint graph is a single cycle."""
    if s < 2:
        raise ValueError("hultman_formula needs s >= 2")
    total = Fraction(2 ** (3 * s - 2) * factorial(s) * factorial(s - 1) ** 2, factorial(2 * s))
    sign = (-1) ** (s + 1)
    for a in range(1, s):
        for b in range(1, min(a, s - a) + 1):
            total += sign * s * (-1) ** (a - b) * _T(a, b, s)
    if total.denominator != 1:
        raise ArithmeticError(f"non-integer Hultman value {total} at s={s}")
    return int(total)


def hultman_bruteforce(m: int, max_m: int = 6) -> int:
    """Count matchings ``dB`` on ``0..2m+1`` with ``dB ∪ dG`` and ``dB ∪ dḠ`` single cycles,
    where ``dG = {2i, 2i+1}`` and ``dḠ = {2i-1, 2i} ∪ {2m+1, 0}``."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > max_m:
        raise ValueError(f"m={m} exceeds brute-force limit {max_m}")
    N = 2 * m + 2
    dG = {}
    for i in range(m + 1):
        dG[2 * i], dG[2 * i + 1] = 2 * i + 1, 2 * i
    dGbar = {0: N - 1, N - 1: 0}
    for i in range(1, m + 1):
        dGbar[2 * i - 1], dGbar[2 * i] = 2 * i, 2 * i - 1
    return sum(
        1
        for dB in _all_matchings(list(range(N)))
        if _is_single_cycle(dB, dGbar) and _is_single_cycle(dB, dG)
    )


def bubbles_exact_count(n: int) -> int:
    """Number of compatible cycles of a graph made of ``n/2`` double edges."""
    if n % 2 or n < 4:
        raise ValueError("bubbles_exact_count needs even n >= 4")
    twice = double_factorial(n - 2) * hultman_formula(n // 2)
    assert twice % 2 == 0
    return twice // 2


def bubbles_asymptotic_ratio(n: int) -> float:
    """Exact bubbles count over its large-n estimate ``(pi/4) n (n-3)!``."""
    return bubbles_exact_count(n) / (math.pi / 4 * n * factorial(n - 3))


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def super_catalan(n: int) -> int:
    """Subdivisions of a convex ``n``-gon by non-crossing diagonals (the empty one included)."""
    if n < 3:
        raise ValueError("super_catalan needs n >= 3")
    # little Schroeder numbers s_k, with S(n) = s_{n-2}
    k = n - 2
    prev, cur = 1, 1
    for j in range(2, k + 1):
        nxt = (3 * (2 * j - 1) * cur - (j - 2) * prev)
        assert nxt % (j + 1) == 0
        prev, cur = cur, nxt // (j + 1)
    return cur


def orthogonal_count(n: int) -> int:
    """Orderings sharing no planar diagram with a fixed ordering: ``(n-1)!/2 - S(n)``."""
    if n < 4:
        raise ValueError("orthogonal_count needs n >= 4")
    return factorial(n - 1) // 2 - super_catalan(n)
