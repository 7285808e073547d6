import itertools

import numpy as np
import pytest

from ldlc.errors import DuplicateVariable
from ldlc.folding import (
    FoldedTable,
    block_size,
    clause_gadget,
    clause_table,
    good_support_check,
    ideal_basis,
    is_folded,
    lift,
    long_code_values,
    poly_from_json,
    poly_to_json,
)
from ldlc.polyspace import FunctionTable, ReducedPoly, point_digits, space


def test_f2_gadget_values():
    g = clause_gadget((1, 2, 3), 2, 3)
    assert g.poly == ReducedPoly.from_terms(
        {(0, 0, 0): 1, (1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1, (1, 1, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1, (1, 1, 1): 1}, 3, 2
    )
    assert g.value((0, 0, 0)) == 1 and g.value((1, 0, 0)) == 0


@pytest.mark.parametrize("clause", [(1, 2, 3), (-1, 2, -3), (-1, -2, -3)])
def test_f3_gadget_three_cases(clause):
    g = clause_gadget(clause, 3, 3)
    assert g.poly.degree <= 6
    for x in point_digits(3, 3):
        x = tuple(int(c) for c in x)
        if max(x) == 2:
            assert g.value(x) == 1
        else:
            sat = any((x[abs(l) - 1] == 1) == (l > 0) for l in clause)
            assert g.value(x) == (0 if sat else 1)
    assert g.value((2, 0, 0)) == 1 and (clause != (1, 2, 3) or g.value((1, 1, 1)) == 0)


def test_gadget_embedding_and_errors():
    g = clause_gadget((2, -4, 5), 2, 6)
    assert g.positions == (1, 3, 4)
    assert g.value((0, 0, 0, 1, 0, 0)) == 1 and g.value((0, 1, 0, 1, 0, 0)) == 0
    with pytest.raises(DuplicateVariable):
        clause_gadget((1, -1, 2), 2, 3)


def test_ideal_examples():
    amb = space(3, 3, 2)
    g = clause_gadget((1, 2, 3), 2, 3)
    J = ideal_basis([g], 0, amb)
    assert J.dim == 1 and J.contains(g.poly.coeffs)
    assert block_size(J) == 128
    assert ideal_basis([], 0, amb).dim == 0 and block_size(ideal_basis([], 0, amb)) == 256
    assert ideal_basis([ReducedPoly.zero(amb)], 0, amb).dim == 0
    full = ideal_basis([ReducedPoly.from_terms({(0, 0, 0): 1}, 3, 2)], 3, amb)
    assert block_size(full) == 1


def test_f3_ideal_dimensions_frozen():
    # one clause over F3 on 3 variables, ambient P^3_6 (= all functions, dim 27)
    g = clause_gadget((1, 2, 3), 3, 3)
    assert ideal_basis([g], 0, space(3, 6, 3)).dim == 1
    assert ideal_basis([g], 2, space(3, 6, 3)).dim == 10  # multiplication by the gadget is injective here


def test_lift_constant_on_cosets(rng):
    amb = space(3, 3, 2)
    J = ideal_basis([clause_gadget((1, 2, 3), 2, 3)], 0, amb)
    A = FoldedTable(J, rng.integers(0, 2, 128, dtype=np.uint8))
    full = lift(A)
    f_idx = int(amb.element_index(J.basis[0]))
    idx = np.arange(amb.size)
    assert np.array_equal(full, full[idx ^ f_idx])
    assert is_folded(full, J)
    assert np.array_equal(lift(FoldedTable(J, np.ones(128, np.uint8))), np.ones(256, np.uint8))
    bare = ideal_basis([], 0, amb)
    vals = rng.integers(0, 2, 256, dtype=np.uint8)
    assert np.array_equal(lift(FoldedTable(bare, vals)), vals[bare.quotient.index(amb.elements())])


@pytest.mark.parametrize("p,clauses,n,d", [(2, [(1, 2, 3)], 3, 3), (2, [(1, -2, 3), (-1, 2, 4)], 4, 4), (3, [(1, 2, 3)], 3, 4)])
def test_honest_long_codes_are_folded(p, clauses, n, d):
    mult = (p - 1) * (d - 3)
    amb = space(n, d if p == 2 else 2 * d, p)
    gadgets = [clause_gadget(c, p, n) for c in clauses]
    J = ideal_basis(gadgets, mult if p == 2 else 2 * d - 6, amb)
    for a in itertools.product(range(2), repeat=n):
        sat = all(g.satisfied_by(a) for g in gadgets)
        # the long code of a vanishes on J exactly when a satisfies every clause
        on_J = long_code_values(a, amb, J.basis) if J.dim else np.zeros(0)
        assert (not on_J.any()) == sat or not sat


def test_good_support_examples():
    g = [clause_gadget((1, 2, 3), 2, 3)]
    assert not good_support_check(FunctionTable.zeros(3, 2), g, 5)
    assert good_support_check(FunctionTable.indicator((0, 0, 0), 2), g, 5)
    assert not good_support_check(FunctionTable.indicator((1, 0, 0), 2), g, 5)
    assert not good_support_check(FunctionTable.indicator((0, 0, 0), 2), g, 3)  # p^(d-3) = 1


def test_poly_json_roundtrip():
    f = clause_gadget((1, -2, 3), 3, 4).poly
    assert poly_from_json(poly_to_json(f)) == f


def test_clause_table_f2():
    assert clause_table((1, 2, 3), 2).tolist() == [1, 0, 0, 0, 0, 0, 0, 0]
    assert clause_table((-1, -2, -3), 2).tolist() == [0, 0, 0, 0, 0, 0, 0, 1]
