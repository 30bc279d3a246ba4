"""Acceptance criteria, one group per criterion.

Each test carries ``criterion(k)``; the terminal summary folds them into one
PASS/FAIL line per criterion.  Literal stated values that the computation does
not reproduce are kept as strict xfail tests next to the passing checks of
what is actually computed.
"""

import itertools
import math
import random

import numpy as np
import pytest

from compatcycles.chy import monodromy_residual, pairing, printed_monodromy_residual
from compatcycles.compat import (
    PerfectMatching,
    cycle_completions,
    double_factorial,
    enumerate_compatible,
    generate,
    theorem_bound,
    third_matchings,
)
from compatcycles.counting import (
    bubbles_exact_count,
    hultman_bruteforce,
    hultman_formula,
    orthogonal_count,
    super_catalan,
)
from compatcycles.expand import (
    amplitude_table,
    count_full_rank_subsets,
    expansion_coefficients,
    find_compatible_basis,
    kleiss_kuijf_orderings,
    numerical_rank,
    reconstruct_pairing,
    standard_basis,
)
from compatcycles.feyn import count_sharing, partial_amplitude_unsigned
from compatcycles.graphs import (
    GraphError,
    TwoRegularGraph,
    all_two_regular,
    edge_union,
    graph_of_type,
    is_compatible,
)

from support import cycles, rel_err, solved, solved_points, time_limit

# points with no accidental relations among small integers
GENERIC = 10 ** 6


def closes(m1, m2) -> bool:
    try:
        return len(TwoRegularGraph.from_multigraph(edge_union(m1, m2)).cycles) == 1
    except GraphError:
        return False


def random_matching(n, r):
    vs = list(range(1, n + 1))
    r.shuffle(vs)
    return PerfectMatching(tuple(zip(vs[::2], vs[1::2])))


# 1 ---------------------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_c1_completion_counts():
    with time_limit(1):
        for n, expected in ((4, 2), (6, 8), (8, 48)):
            A = PerfectMatching(tuple((i, i + 1) for i in range(1, n, 2)))
            Ps = list(cycle_completions(A))
            assert len(Ps) == expected == double_factorial(n - 2)
            assert len({P.pairs for P in Ps}) == expected
            assert all(closes(A, P) for P in Ps)


# 2 ---------------------------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_c2_third_matching_bound():
    r = random.Random(2)
    with time_limit(10):
        for n in (4, 6, 8):
            for _ in range(50):
                B, P = random_matching(n, r), random_matching(n, r)
                Qs = list(third_matchings(B, P))
                assert len(Qs) >= double_factorial(n - 3)
                assert len({Q.pairs for Q in Qs}) == len(Qs)
                assert all(closes(Q, B) and closes(P, Q) for Q in Qs)


# 3 ---------------------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_c3_theorem_bounds_every_graph():
    with time_limit(120):
        for n in (5, 6, 7):
            for G in all_two_regular(n):
                cs = generate(G, verify=True)
                even = all(len(c) % 2 == 0 for c in G.cycles)
                bound = math.factorial(n - 2) // 2 if even else math.ceil(math.factorial(n - 2) / 4)
                assert theorem_bound(G) == bound
                assert cs.count >= bound and cs.verified
                assert all(is_compatible(G, c) for c in cs.cycles)


# 4 ---------------------------------------------------------------------------------------

def bubbles(n):
    return graph_of_type((2,) * (n // 2))


@pytest.mark.criterion(4)
def test_c4_bubbles_formula_matches_enumeration():
    with time_limit(60):
        for n, value in ((4, 1), (6, 16)):
            assert enumerate_compatible(bubbles(n)).count == bubbles_exact_count(n) == value


@pytest.mark.criterion(4)
@pytest.mark.slow
def test_c4_bubbles_formula_matches_enumeration_n8():
    with time_limit(1800):
        assert enumerate_compatible(bubbles(8)).count == bubbles_exact_count(8) == 480


@pytest.mark.criterion(4)
def test_c4_hultman_formula_matches_bruteforce():
    with time_limit(60):
        got = [hultman_formula(s) for s in range(2, 6)]
        assert got == [hultman_bruteforce(s - 1) for s in range(2, 6)] == [1, 4, 20, 148]


@pytest.mark.criterion(4)
@pytest.mark.xfail(strict=True, reason="stated values 20 and 1464 disagree with enumeration (16, 480)")
def test_c4_literal_stated_values():
    assert enumerate_compatible(bubbles(6)).count == 20
    assert enumerate_compatible(bubbles(8)).count == 1464


# 5 ---------------------------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_c5_counting_identities():
    with time_limit(60):
        share = [count_sharing(n) for n in (4, 5, 6, 7)]
        assert share == [super_catalan(n) for n in (4, 5, 6, 7)] == [3, 11, 45, 197]
        orth = [len(cycles(n)) - s for n, s in zip((4, 5, 6, 7), share)]
        assert orth == [orthogonal_count(n) for n in (4, 5, 6, 7)] == [0, 1, 15, 163]


# 6 ---------------------------------------------------------------------------------------

def _check_pairs(sols, pairs):
    for a, b in pairs:
        exact = partial_amplitude_unsigned(a, b, sols.kin)
        z = pairing(a, b, sols)
        if exact == 0:
            continue
        assert rel_err(abs(z), abs(float(exact))) < 1e-8, (a, b)


@pytest.mark.criterion(6)
def test_c6_amplitude_agreement():
    r = random.Random(6)
    with time_limit(300):
        for n in (4, 5, 6, 7):
            cs = cycles(n)
            for sols in solved_points(n, 5):
                assert len(sols) == math.factorial(n - 3)
                if n <= 5:
                    pairs = itertools.product(cs, cs)
                else:
                    pairs = [(r.choice(cs), r.choice(cs)) for _ in range(200)]
                _check_pairs(sols, pairs)


@pytest.mark.criterion(6)
def test_c6_orthogonal_pairs_vanish():
    with time_limit(60):
        for n in (4, 5, 6):
            sols = solved_points(n, 1)[0]
            cs = cycles(n)
            table = np.abs(amplitude_table(cs, sols))
            scale = table.max()
            for i, a in enumerate(cs):
                for j, b in enumerate(cs):
                    if partial_amplitude_unsigned(a, b, sols.kin) == 0:
                        assert table[i, j] < 1e-8 * scale


@pytest.mark.criterion(6)
@pytest.mark.slow
def test_c6_solution_count_n8():
    from compatcycles.chy import solve_scattering
    from compatcycles.kinematics import random_kinematics

    sols = solve_scattering(random_kinematics(8, 1), allow_large=True)
    assert len(sols) == 120


# 7 ---------------------------------------------------------------------------------------

def _monodromy_samples(n, r, count=50):
    out = []
    while len(out) < count:
        A = r.sample(range(1, n + 1), r.randint(2, n - 2))
        a = r.choice(A)
        b = r.choice([d for d in range(1, n + 1) if d not in A])
        out.append((A, a, b))
    return out


@pytest.mark.criterion(7)
def test_c7_monodromy_identity():
    r = random.Random(7)
    with time_limit(60):
        for n in (5, 6, 7):
            sols = solved_points(n, 1)[0]
            worst = max(monodromy_residual(sols, A, a, b).max() for A, a, b in _monodromy_samples(n, r))
            assert worst < 1e-9


@pytest.mark.criterion(7)
@pytest.mark.xfail(strict=True, reason="the identity as printed is not satisfied; the corrected form is")
def test_c7_literal_printed_identity():
    r = random.Random(7)
    for n in (5, 6, 7):
        sols = solved_points(n, 1)[0]
        for A, a, b in _monodromy_samples(n, r):
            assert printed_monodromy_residual(sols, A, a, b).max() < 1e-9


# 8 ---------------------------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_c8_expansion_round_trip():
    r = random.Random(8)
    with time_limit(300):
        for n in (5, 6):
            sols = solved_points(n, 1)[0]
            basis = standard_basis(n)
            amp = amplitude_table(list(basis), sols)
            graphs = list(all_two_regular(n))
            # zero pairings are compared on the scale of the basis amplitudes
            scale = np.abs(amp).max()
            for _ in range(10):
                G1, G2 = r.choice(graphs), r.choice(graphs)
                e1 = expansion_coefficients(G1, basis, generate(G1).cycles, sols)
                e2 = expansion_coefficients(G2, basis, generate(G2).cycles, sols)
                direct = pairing(G1, G2, sols)
                err = abs(reconstruct_pairing(G1, G2, e1, e2, amp) - direct)
                assert err < 1e-7 * max(abs(direct), 1e-8 * scale)


@pytest.mark.criterion(8)
def test_c8_compatible_bases_every_graph():
    with time_limit(300):
        for n in (4, 5, 6):
            sols = solved_points(n, 1)[0]
            for G in all_two_regular(n):
                found = find_compatible_basis(G, sols)
                assert found.complete, G.notation()
                assert numerical_rank(found.cycles, sols).rank == math.factorial(n - 3)


# 9 ---------------------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_c9_ranks():
    with time_limit(120):
        for n, expected in ((4, 1), (5, 2), (6, 6), (7, 24)):
            for sols in solved_points(n, 2):
                assert numerical_rank(cycles(n), sols).rank == expected


@pytest.mark.criterion(9)
def test_c9_uniform_matroids_small_n():
    with time_limit(60):
        for n, k in ((4, 1), (5, 2)):
            for sols in solved_points(n, 3, bound=GENERIC):
                total = math.comb(len(cycles(n)), k)
                assert count_full_rank_subsets(cycles(n), sols, k) == total


def kk_scan(sols):
    return count_full_rank_subsets(kleiss_kuijf_orderings(6), sols, 6)


@pytest.mark.criterion(9)
def test_c9_kleiss_kuijf_scan_stable():
    with time_limit(3600):
        counts = {kk_scan(s) for s in solved_points(6, 3, bound=GENERIC)}
        assert counts == {126856}
        assert math.comb(24, 6) - 126856 == 7740


@pytest.mark.criterion(9)
@pytest.mark.xfail(strict=True, reason="the scan counts 126856 full-rank subsets, not 126820")
def test_c9_literal_stated_basis_count():
    assert kk_scan(solved_points(6, 1, bound=GENERIC)[0]) == 126820
