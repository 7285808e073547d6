import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldlc.algebra import (
    FieldElem,
    QuotientMap,
    Reducer,
    digits_to_int,
    int_to_digits,
    kernel_basis,
    quotient_representatives,
    rank,
    rank_batch,
    rref,
    same_span,
    solve,
)
from ldlc.errors import DimensionMismatch, ParamOutOfRange

mats = st.tuples(st.sampled_from([2, 3]), st.integers(1, 6), st.integers(1, 8), st.integers(0, 2 ** 32 - 1)).map(
    lambda t: (t[0], np.random.default_rng(t[3]).integers(0, t[0], (t[1], t[2]), dtype=np.uint8))
)


def test_field_elem_arithmetic():
    a, b = FieldElem(2, 3), FieldElem(2, 3)
    assert int(a + b) == 1
    assert int(a * b) == 1
    assert int(a / b) == 1
    assert int(-a) == 1
    assert int(1 - a) == 2
    with pytest.raises(ZeroDivisionError):
        FieldElem(0, 2).inverse()
    with pytest.raises(ParamOutOfRange):
        FieldElem(1, 5)
    with pytest.raises(DimensionMismatch):
        FieldElem(1, 2) + FieldElem(1, 3)


def test_rref_frozen_example(backend):
    r, piv = rref([[1, 2, 0], [2, 1, 0], [0, 0, 1]], 3)
    assert piv == [0, 2]
    assert r.tolist() == [[1, 2, 0], [0, 0, 1]]


@given(mats)
def test_rank_nullity(pm):
    p, m = pm
    ker = kernel_basis(m, p)
    assert rank(m, p) + ker.shape[0] == m.shape[1]
    assert not (m.astype(np.int64) @ ker.T.astype(np.int64) % p).any()


@given(mats, st.integers(0, 2 ** 32 - 1))
def test_solve_consistent_systems(pm, seed):
    p, m = pm
    x0 = np.random.default_rng(seed).integers(0, p, m.shape[1])
    b = m.astype(np.int64) @ x0 % p
    x = solve(m, b, p)
    assert x is not None
    assert np.array_equal(m.astype(np.int64) @ x % p, b)


def test_solve_inconsistent():
    assert solve([[1, 1], [1, 1]], [0, 1], 2) is None


@given(mats)
def test_reducer_is_canonical(pm):
    p, m = pm
    red = Reducer(m, p)
    rng = np.random.default_rng(0)
    v = rng.integers(0, p, m.shape[1])
    shifted = (v + rng.integers(0, p, m.shape[0]) @ m.astype(np.int64)) % p
    assert np.array_equal(red.reduce(v), red.reduce(shifted))
    assert not red.reduce(v)[red.pivots].any()


def test_lex_min_representative():
    # F2^2 / span{(1,1)}: representatives (0,0) and (0,1)
    reps, q = quotient_representatives(np.eye(2, dtype=np.uint8), [[1, 1]], 2)
    assert reps.tolist() == [[0, 0], [0, 1]]
    assert q.index(np.array([1, 0])) == 1


@pytest.mark.parametrize("p,cols", [(2, 4), (3, 3)])
def test_quotient_map_bijective(p, cols, rng):
    sub = rng.integers(0, p, (2, cols))
    q = QuotientMap(sub, p, cols)
    reps = q.representatives()
    assert reps.shape[0] == p ** (cols - rank(sub, p))
    assert sorted(q.index(reps).tolist()) == list(range(q.size))
    # every vector lands on the coset of its representative
    for v in itertools.product(range(p), repeat=cols):
        i = q.index(np.array(v))
        assert rank(np.vstack([sub, (np.array(v) - reps[i]) % p]), p) == rank(sub, p)


def test_quotient_index_big_ints():
    q = QuotientMap(np.zeros((0, 80), dtype=np.uint8), 3, 80)
    v = np.full(80, 2, dtype=np.uint8)
    assert q.index(v) == 3 ** 80 - 1
    assert np.array_equal(q.representative(3 ** 80 - 1), v)


@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 30))
def test_digits_roundtrip(p, x):
    n = 1
    while p ** n <= x:
        n += 1
    assert digits_to_int(int_to_digits(x, p, n), p) == x


def test_same_span_and_rank_batch():
    assert same_span([[1, 1, 0], [0, 1, 1]], [[1, 0, 1], [1, 1, 0]], 2)
    assert not same_span([[1, 1, 0]], [[1, 0, 1]], 2)
    stack = np.array([np.eye(3), np.zeros((3, 3)), [[1, 2, 0], [2, 1, 0], [0, 0, 0]]])
    assert rank_batch(stack, 3).tolist() == [3, 0, 1]
