"""Clause gadgets, folding ideals and tables folded over them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import QuotientMap, Reducer, check_prime
from .errors import CapExceeded, DimensionMismatch, DuplicateVariable, ParamOutOfRange
from .polyspace import (
    ENUM_CAP,
    FunctionTable,
    ReducedPoly,
    Space,
    point_digits,
    poly_of,
    product_table,
    space,
    substitute,
    table_of,
)

IDEAL_CAP = 1 << 16


def clause_table(clause, p: int) -> np.ndarray:
    """Table on F_p^3: 0 on satisfying boolean points, 1 everywhere else."""
    pts = point_digits(3, p)
    lits = [int(l) for l in clause]
    boolean = (pts <= 1).all(axis=1)
    sat = np.zeros(len(pts), dtype=bool)
    for j, lit in enumerate(lits):
        sat |= pts[:, j] == (1 if lit > 0 else 0)
    return np.where(boolean & sat, 0, 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class ClauseGadget:
    """Polynomial vanishing exactly on the boolean assignments satisfying a clause.

    ``clause`` holds three signed 1-based positions among the ``n`` variables.
    Over F_3 the polynomial is also nonzero (equal to 1) off {0,1}^3.
    """

    clause: tuple
    p: int
    n: int
    poly: ReducedPoly = field(repr=False)

    @property
    def positions(self) -> tuple:
        return tuple(abs(l) - 1 for l in self.clause)

    def value(self, x) -> int:
        return self.poly(x)

    def satisfied_by(self, x) -> bool:
        return self.poly(x) == 0


def clause_gadget(clause, p: int, n: int) -> ClauseGadget:
    check_prime(p)
    clause = tuple(int(l) for l in clause)
    if len(clause) != 3 or 0 in clause:
        raise ParamOutOfRange(f"a clause has three nonzero literals, got {clause}")
    vars_ = [abs(l) for l in clause]
    if len(set(vars_)) != 3:
        raise DuplicateVariable(f"clause {clause} repeats a variable")
    if max(vars_) > n:
        raise DimensionMismatch(f"clause {clause} uses a variable beyond n={n}")
    local = poly_of(FunctionTable(3, p, clause_table(clause, p)), d=3 * (p - 1))
    target = space(n, 3 * (p - 1), p)
    coeffs = substitute(local.coeffs, local.space, target, [v - 1 for v in vars_])
    return ClauseGadget(clause, p, n, ReducedPoly(target, coeffs))


@dataclass(eq=False)
class FoldingIdeal:
    """``J = {sum r_i q_i : deg r_i <= multiplier_degree}`` inside ``ambient``."""

    ambient: Space
    generators: tuple
    multiplier_degree: int
    reducer: Reducer = field(repr=False)

    @property
    def dim(self) -> int:
        return self.reducer.dim

    @property
    def basis(self) -> np.ndarray:
        """Row-reduced basis, one coefficient vector per row."""
        return self.reducer.rows

    @cached_property
    def quotient(self) -> QuotientMap:
        return QuotientMap(self.basis, self.ambient.p, self.ambient.dim)

    def contains(self, coeffs) -> bool:
        return not self.reducer.reduce(coeffs).any()


def ideal_basis(gadgets, multiplier_degree: int, ambient: Space, cap: int = IDEAL_CAP) -> FoldingIdeal:
    """Row-reduced span of ``{m * q}`` over monomials ``m`` of bounded degree and gadgets ``q``."""
    p, n = ambient.p, ambient.n
    polys = [g.poly if isinstance(g, ClauseGadget) else g for g in gadgets]
    mult = space(n, multiplier_degree, p)
    rows = []
    if mult.dim and polys:
        if mult.dim * len(polys) > cap:
            raise CapExceeded("ideal spanning set", mult.dim * len(polys), cap)
        for q in polys:
            if (q.n, q.p) != (n, p):
                raise DimensionMismatch("gadget and ambient space differ in n or p")
            if not q.coeffs.any():
                continue
            wide = space(n, mult.d + q.space.d, p)
            idx = product_table(mult, q.space, wide)
            nz = np.flatnonzero(q.coeffs)
            block = np.zeros((mult.dim, wide.dim), dtype=np.int64)
            for j in nz:
                np.add.at(block, (np.arange(mult.dim), idx[:, j]), int(q.coeffs[j]))
            block %= p
            if block[:, ambient.dim :].any():
                raise ParamOutOfRange(f"multiples of a gadget leave {ambient}")
            rows.append(block[:, : ambient.dim])
    mat = np.concatenate(rows) if rows else np.zeros((0, ambient.dim), dtype=np.uint8)
    return FoldingIdeal(ambient, tuple(polys), multiplier_degree, Reducer(mat, p, cols=ambient.dim))


def block_size(ideal: FoldingIdeal, ambient: Space | None = None) -> int:
    ambient = ambient or ideal.ambient
    return ambient.p ** (ambient.dim - ideal.dim)


@dataclass(eq=False)
class FoldedTable:
    """A function on ``ambient / J`` stored by coset index."""

    ideal: FoldingIdeal
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.uint8)
        if self.values.shape != (self.ideal.quotient.size,):
            raise DimensionMismatch(f"{self.values.shape[0]} values for {self.ideal.quotient.size} cosets")

    def __call__(self, coeffs) -> int:
        return int(self.values[self.ideal.quotient.index(coeffs)])

    def to_json(self) -> dict:
        return {
            "ideal_generators": [poly_to_json(q) for q in self.ideal.generators],
            "multiplier_degree": self.ideal.multiplier_degree,
            "ambient": {"n": self.ideal.ambient.n, "d": self.ideal.ambient.d, "p": self.ideal.ambient.p},
            "quotient_dim": self.ideal.quotient.dim,
            "values": (self.values + ord("0")).tobytes().decode(),
        }


def lift(A: FoldedTable, cap: int = ENUM_CAP) -> np.ndarray:
    """The table ``g -> A(g + J)`` over every element of the ambient space."""
    elems = A.ideal.ambient.elements(cap)
    return A.values[A.ideal.quotient.index(elems)]


def is_folded(full_values, ideal: FoldingIdeal, cap: int = ENUM_CAP) -> bool:
    """Is a table over the ambient space constant on cosets of the ideal?"""
    sp = ideal.ambient
    full_values = np.asarray(full_values)
    elems = sp.elements(cap).astype(np.int64)
    w = sp.p ** np.arange(sp.dim, dtype=np.int64)
    for j in ideal.basis:
        shifted = ((elems + j) % sp.p) @ w
        if not np.array_equal(full_values[shifted], full_values):
            return False
    return True


def long_code_values(a, sp: Space, elems=None) -> np.ndarray:
    """The low-degree long code of a point: ``g -> g(a)`` on every element (or on ``elems``)."""
    ev = sp.eval_vector(a).astype(np.int64)
    if elems is None:
        elems = sp.elements()
    return (np.asarray(elems, dtype=np.int64) @ ev % sp.p).astype(np.uint8)


def good_support_check(beta: FunctionTable, gadgets, d: int) -> bool:
    """Small support touching a point where some gadget is nonzero.

    When this holds, every table folded over the gadgets' ideal has a zero
    Fourier coefficient at ``beta``.
    """
    supp = beta.support()
    if d < 3 or supp.size == 0 or supp.size >= beta.p ** (d - 3):
        return False
    for g in gadgets:
        q = g.poly if isinstance(g, ClauseGadget) else g
        if table_of(q).values[supp].any():
            return True
    return False


def poly_to_json(f: ReducedPoly) -> dict:
    return {"n": f.n, "p": f.p, "terms": [[list(e), c] for e, c in sorted(f.terms().items())]}


def poly_from_json(obj: dict) -> ReducedPoly:
    return ReducedPoly.from_terms({tuple(e): c for e, c in obj["terms"]}, obj["n"], obj["p"])
