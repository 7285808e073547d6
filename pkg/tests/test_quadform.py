from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldlc.algebra import same_span
from ldlc.errors import CapExceeded
from ldlc.polyspace import FunctionTable, all_tables, distance_to_space, point_digits, space
from ldlc.quadform import (
    b_space_basis,
    build_quadform,
    coset_distance,
    diagonal_form,
    direct_quadform,
    eval_vector,
    phi_bruteforce,
    quad_distribution,
    rank_and_kernel,
    statistical_distance,
)


def _square_pairing(beta, sd, c):
    """<beta, p^2> evaluated pointwise."""
    sq = [(sd.eval_vector(x).astype(np.int64) @ c) ** 2 for x in _points(beta.n)]
    return int(np.dot(beta.values.astype(np.int64), sq) % 3)


def _points(n):
    return point_digits(n, 3)


def _table(sp, coeffs):
    return (np.asarray(coeffs, dtype=np.int64) @ sp.generator_tables.astype(np.int64) % 3).astype(np.uint8)


@pytest.mark.parametrize("x,n,d,expected", [((2,), 1, 2, [1, 2, 1]), ((0, 0), 2, 2, [1, 0, 0, 0, 0, 0]), ((1, 2), 2, 1, [1, 1, 2])])
def test_eval_vector_examples(x, n, d, expected):
    assert eval_vector(x, n, d).tolist() == expected


def test_build_examples():
    assert not build_quadform(FunctionTable.zeros(1, 3), 1, 1).matrix.any()
    q = build_quadform(FunctionTable.indicator((0,), 3), 1, 1)
    assert q.matrix.tolist() == [[1, 0], [0, 0]]
    with pytest.raises(CapExceeded):
        build_quadform(FunctionTable.zeros(2, 3), 2, 2, cap=3)


@given(st.integers(1, 2), st.integers(1, 2), st.integers(0, 2 ** 32 - 1))
def test_matrix_matches_direct_sum_and_is_symmetric(n, d, seed):
    rng = np.random.default_rng(seed)
    beta = FunctionTable(n, 3, rng.integers(0, 3, 3 ** n, dtype=np.uint8))
    q = build_quadform(beta, n, d)
    assert np.array_equal(q.matrix, q.matrix.T)
    assert np.array_equal(q.matrix, direct_quadform(beta, d))


def test_square_pairing_exhaustive_n1():
    for d in (1, 2):
        sd = space(1, d, 3)
        for tab in all_tables(1, 3):
            beta = FunctionTable(1, 3, tab)
            q = build_quadform(beta, 1, d)
            for c in sd.elements():
                assert q.value(c) == _square_pairing(beta, sd, c)


def test_coset_invariance(rng):
    n, d = 2, 1
    low = space(n, 2 * n - 2 * d - 1, 3)
    for _ in range(10):
        beta = FunctionTable(n, 3, rng.integers(0, 3, 9, dtype=np.uint8))
        gamma = _table(low, low.random(rng))
        shifted = FunctionTable(n, 3, (beta.values + gamma) % 3)
        assert np.array_equal(build_quadform(beta, n, d).matrix, build_quadform(shifted, n, d).matrix)


def test_rank_examples():
    r, _ = rank_and_kernel(build_quadform(FunctionTable.indicator((0,), 3), 1, 1))
    assert r == 1
    assert rank_and_kernel(build_quadform(FunctionTable.zeros(2, 3), 2, 2))[0] == 0
    beta = FunctionTable.from_string("100000020", 3)
    assert coset_distance(beta, 2) == 2
    assert rank_and_kernel(build_quadform(beta, 2, 2))[0] == 2


def test_coset_distance_is_polyspace_distance(rng):
    for _ in range(10):
        beta = FunctionTable(2, 3, rng.integers(0, 3, 9, dtype=np.uint8))
        assert coset_distance(beta, 1) == distance_to_space(beta, space(2, 1, 3))


@pytest.mark.parametrize("d", [1, 2])
def test_kernel_is_b_space(d):
    for tab in all_tables(1, 3):
        beta = FunctionTable(1, 3, tab)
        q = build_quadform(beta, 1, d)
        _, ker = rank_and_kernel(q)
        b = b_space_basis(beta, 1, d, d)
        dim = space(1, d, 3).dim
        ka = np.array([k.coeffs for k in ker]).reshape(-1, dim)
        kb = np.array([k.coeffs for k in b]).reshape(-1, dim)
        assert len(ker) == len(b) and (len(ker) == 0 or same_span(ka, kb, 3))


def test_b_space_edge_cases():
    n, d = 2, 1
    low = space(n, 2 * n - 2 * d - 1, 3)
    beta = FunctionTable(n, 3, _table(low, np.ones(low.dim, dtype=np.uint8)))
    assert len(b_space_basis(beta, n, d, 1)) == space(n, 1, 3).dim
    rand = FunctionTable.from_string("120021001", 3)
    assert len(b_space_basis(rand, n, d, 3)) == space(n, 3, 3).dim  # k > 2d


def test_distribution_examples():
    z = quad_distribution(np.zeros((2, 2), dtype=np.uint8), offset=1)
    assert z.probs == (0, 1, 0) and z.distance == Fraction(2, 3)
    sq = quad_distribution(np.array([[1]]))
    assert sq.probs == (Fraction(1, 3), Fraction(2, 3), 0) and sq.distance == Fraction(1, 3)
    assert quad_distribution(np.array([[1]]), mode="enumerate").probs == sq.probs


def test_distance_monotone_in_rank():
    dists = [quad_distribution(diagonal_form([1] * r + [0] * (4 - r)), mode="enumerate").distance for r in range(1, 5)]
    assert all(a >= b for a, b in zip(dists, dists[1:]))
    assert dists[-1] < dists[0]


@given(st.lists(st.integers(0, 2), min_size=4, max_size=4), st.integers(0, 2 ** 32 - 1))
def test_exact_matches_enumeration(entries, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 3, (4, 4))
    sym = (m + m.T + np.diag(entries)) % 3
    ex = quad_distribution(sym, offset=2)
    assert ex.probs == quad_distribution(sym, offset=2, mode="enumerate").probs
    mc = quad_distribution(sym, offset=2, mode="montecarlo", samples=20_000, rng=rng)
    for p, q, s in zip(ex.probs, mc.probs, mc.stderr):
        assert abs(float(p) - q) <= 3 * s + 1e-3


def test_quadform_shift_uses_beta_sum():
    beta = FunctionTable.from_string("210", 3)
    q = build_quadform(beta, 1, 1)
    assert q.shift == 0 and quad_distribution(q, offset=1).shift == 0
    beta = FunctionTable.from_string("200", 3)
    assert quad_distribution(build_quadform(beta, 1, 1), offset=1).shift == 2


def test_statistical_distance_float():
    assert abs(statistical_distance((0.5, 0.25, 0.25)) - 1 / 6) < 1e-12


def test_phi_base_cases():
    assert phi_bruteforce(1, 3, 0, 2) == 0
    assert phi_bruteforce(1, 1, 0, 2) >= 1
    assert phi_bruteforce(1, 2, 0, 2) >= 1
    assert phi_bruteforce(1, 1, 0, 1) == 1
    with pytest.raises(CapExceeded):
        phi_bruteforce(1, 1, 0, 3)


def test_to_json():
    q = build_quadform(FunctionTable.indicator((0,), 3), 1, 1)
    assert q.to_json() == {"n": 1, "d": 1, "beta": "100", "rank": 1}
