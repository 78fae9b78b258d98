from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holokit.groups import GroupMismatchError, Isom2, PosReal
from holokit.holonomy import is_flat, loop_holonomy
from holokit.pairwise import (
    NoiseLaw,
    PCMatrix,
    PCMatrixError,
    from_connection,
    inconsistency_quadratic,
    inconsistency_sup,
    is_consistent,
    koczkodaj_ii,
    matrix_from_csv,
    matrix_from_json,
    matrix_to_json,
    priority_vector,
    random_pc,
    to_connection,
    triad_distances,
)
from oracles import koczkodaj_bruteforce

F = Fraction
CONSISTENT = [[1, 2, 4], [F(1, 2), 1, 2], [F(1, 4), F(1, 2), 1]]
BROKEN = [[1, 2, 8], [F(1, 2), 1, 2], [F(1, 8), F(1, 2), 1]]


def rows_of(A: PCMatrix):
    return [[None if g is None else g.value for g in row] for row in A.to_rows()]


def random_rational_matrix(rng: random.Random, n: int, hole_rate=0.0):
    vals = [F(p, q) for p in range(1, 10) for q in range(1, 10)]
    rows = [[F(1) if i == j else None for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < hole_rate:
                continue
            v = rng.choice(vals)
            rows[i][j], rows[j][i] = v, 1 / v
    return rows


# examples


def test_consistent_matrix_is_flat_triangle():
    A = PCMatrix.from_rows(CONSISTENT)
    conn = to_connection(A)
    assert list(conn.graph.edges) == [(0, 1), (0, 2), (1, 2)]
    assert is_flat(conn, 0).flat
    assert is_consistent(A, 0).consistent


def test_currency_triangle_holonomy():
    A = PCMatrix.from_rows([[1, 2, 4], [F(1, 2), 1, 3], [F(1, 4), F(1, 3), 1]])
    assert loop_holonomy(to_connection(A), [0, 1, 2, 0]) == PosReal(F(3, 2))
    assert inconsistency_sup(A) == pytest.approx(math.log(1.5))
    assert inconsistency_quadratic(A) == pytest.approx(math.log(1.5) ** 2)


def test_hole_gives_path_graph():
    A = PCMatrix.from_rows([[1, 2, None], [F(1, 2), 1, 3], [None, F(1, 3), 1]])
    assert list(A.graph.edges) == [(0, 1), (1, 2)]
    assert is_flat(to_connection(A), 0).flat
    assert is_consistent(A, 0).triads_checked == 0


def test_broken_matrix():
    A = PCMatrix.from_rows(BROKEN)
    rep = is_consistent(A, 0)
    assert not rep.consistent and rep.worst_triad == (0, 1, 2)
    assert koczkodaj_ii(A) == F(1, 2)
    assert koczkodaj_ii(PCMatrix.from_rows(CONSISTENT)) == 0


def test_consistent_has_zero_indicators():
    A = PCMatrix.from_rows(CONSISTENT)
    assert (inconsistency_sup(A), inconsistency_quadratic(A)) == (0, 0)


def test_surveyed_path_with_angle_error():
    poses = [Isom2.rotation_deg(90 * k, (math.cos(k), math.sin(k))) for k in range(4)]
    A = PCMatrix.from_weights(poses, "isom2")
    assert inconsistency_sup(A) < 1e-9
    entries = A.entries()
    entries[(0, 2)] = entries[(0, 2)] * Isom2.rotation_deg(5)
    B = PCMatrix(4, entries, "isom2")
    assert inconsistency_sup(B) > math.radians(5) - 1e-9
    d = triad_distances(B)
    assert d[(1, 2, 3)] < 1e-9


def test_priority_examples():
    pv = priority_vector(PCMatrix.from_rows(CONSISTENT))
    assert pv.weights == (F(4, 7), F(2, 7), F(1, 7)) and pv.exact
    pv = priority_vector(PCMatrix.from_rows([[1] * 4 for _ in range(4)]))
    assert pv.weights == (F(1, 4),) * 4
    chain = PCMatrix(3, {(0, 1): PosReal(2), (1, 2): PosReal(2)})
    assert priority_vector(chain).weights == (F(4, 7), F(2, 7), F(1, 7))


def test_geometric_mean_for_inexact():
    A = PCMatrix.from_rows([[1, 2.0, 8.0], [0.5, 1, 2.0], [0.125, 0.5, 1]])
    pv = priority_vector(A)
    gm = np.array([(1 * 2 * 8) ** (1 / 3), (0.5 * 1 * 2) ** (1 / 3), (0.125 * 0.5) ** (1 / 3)])
    assert pv.method == "geometric_mean"
    assert np.allclose(pv.weights, gm / gm.sum(), atol=1e-12)


def test_random_pc_deterministic():
    law = NoiseLaw("gaussian", sigma=0.1, seed=42)
    a, b = random_pc(3, law).matrix, random_pc(3, law).matrix
    assert a.entries() == b.entries()
    assert a.entries() != random_pc(3, NoiseLaw("gaussian", sigma=0.1, seed=43)).matrix.entries()


def test_zero_noise_limit():
    A = random_pc(4, NoiseLaw("gaussian", sigma=1e-300, seed=1), [4, 2, 1, 1]).matrix
    assert koczkodaj_ii(A) == 0


def test_law_of_large_numbers():
    w = [3.0, 1.0, 2.0]
    sigma, samples = 0.3, 1000
    logs = [math.log(random_pc(3, NoiseLaw("gaussian", sigma=sigma, seed=s), w).matrix(0, 1).value) for s in range(samples)]
    assert abs(np.mean(logs) - math.log(3.0)) <= 3 * sigma / math.sqrt(samples)


def test_uniform_clamping_is_counted():
    res = random_pc(5, NoiseLaw("uniform", half_width=5.0, seed=3))
    assert res.clamps > 0
    assert all(g.value >= 1e-6 for g in res.matrix.entries().values())


def test_nonreciprocal_keeps_lower_triangle():
    res = random_pc(4, NoiseLaw("gaussian", sigma=0.2, reciprocal=False, seed=9))
    A = res.matrix
    assert not A.reciprocal and len(A.lower_entries()) == 6
    assert A(1, 0) != A(0, 1).inverse()
    assert A.reciprocal_get(1, 0) == A(0, 1).inverse()
    assert all(d.dist_identity() > 0 for d in A.reciprocity_defect().values())


def test_from_rows_validation():
    with pytest.raises(PCMatrixError):
        PCMatrix.from_rows([[1, 2], [F(1, 3), 1]])
    A = PCMatrix.from_rows([[1, 2], [F(1, 3), 1]], reciprocal=False)
    assert A(1, 0) == PosReal(F(1, 3))
    with pytest.raises(PCMatrixError):
        PCMatrix.from_rows([[1, 2], [1]])


def test_koczkodaj_needs_posreal():
    with pytest.raises(GroupMismatchError):
        koczkodaj_ii(PCMatrix.from_weights([1, 2, 3], "addreal"))


def test_json_and_csv_round_trip():
    A = PCMatrix.from_rows(BROKEN, labels=["x", "y", "z"])
    B = matrix_from_json(matrix_to_json(A))
    assert B.entries() == A.entries() and B.labels == A.labels
    C = matrix_from_csv("x,y,z\n1,2,8\n1/2,1,2\n1/8,1/2,1\n")
    assert C.entries() == A.entries() and C.labels == ("x", "y", "z")
    R = random_pc(3, NoiseLaw(reciprocal=False, seed=1)).matrix
    assert matrix_from_json(matrix_to_json(R)).lower_entries() == R.lower_entries()


def test_connection_round_trip():
    A = PCMatrix.from_rows(BROKEN)
    assert from_connection(to_connection(A)).entries() == A.entries()


def test_partial_matrix_consistency_is_weaker_than_flatness():
    # a chordless 4-cycle has no triad, so it is vacuously consistent while curved
    A = PCMatrix(4, {(0, 1): PosReal(2), (1, 2): PosReal(2), (2, 3): PosReal(2), (0, 3): PosReal(1)})
    assert is_consistent(A, 0).consistent
    assert not is_flat(to_connection(A), 0).flat


# properties


@pytest.mark.parametrize("seed", range(4))
def test_koczkodaj_matches_bruteforce(seed):
    rng = random.Random(seed)
    for _ in range(25):
        n = rng.randint(3, 5)
        rows = random_rational_matrix(rng, n, hole_rate=0.2 if seed % 2 else 0.0)
        assert koczkodaj_ii(PCMatrix.from_rows(rows)) == koczkodaj_bruteforce(rows)


@given(st.lists(st.fractions(min_value=F(1, 9), max_value=9, max_denominator=9), min_size=2, max_size=6))
def test_weights_give_consistent_flat_matrix(ws):
    A = PCMatrix.from_weights(ws)
    assert is_consistent(A, 0).consistent and is_flat(to_connection(A), 0).flat
    pv = priority_vector(A)
    assert pv.exact and pv.matrix().entries() == A.entries()


@given(st.integers(0, 10_000))
def test_consistency_equals_flatness_on_complete_matrices(seed):
    rng = random.Random(seed)
    A = PCMatrix.from_rows(random_rational_matrix(rng, rng.randint(3, 6)))
    assert is_consistent(A, 0).consistent == is_flat(to_connection(A), 0).flat


@given(st.integers(0, 10_000), st.permutations(range(5)))
def test_permutation_equivariance(seed, perm):
    rng = random.Random(seed)
    A = PCMatrix.from_rows(random_rational_matrix(rng, 5, 0.1))
    B = A.permuted(perm)
    assert koczkodaj_ii(B) == koczkodaj_ii(A)
    assert is_consistent(B, 0).consistent == is_consistent(A, 0).consistent
    assert sorted(triad_distances(B).values()) == pytest.approx(sorted(triad_distances(A).values()))
    for i in range(5):
        for j in range(5):
            assert B(perm[i], perm[j]) == A(i, j)


@given(st.integers(0, 10_000))
def test_priority_permutation_equivariance(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    ws = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    A = PCMatrix.from_weights(ws)
    p = priority_vector(A).weights
    q = priority_vector(A.permuted(perm)).weights
    assert all(q[perm[i]] == p[i] for i in range(n))
