"""Quadratic forms Q^beta over F_3 and the bias of p^T Q p.

``Q^beta = sum_x beta(x) e_x e_x^T`` where ``e_x`` lists the values of the
monomials of P^n_d at ``x``. Entry ``(a, b)`` equals ``<beta, x^a x^b>``, so the
matrix is read off the syndrome of beta over P^n_{2d}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import kernel_basis, rank, rank_batch
from .errors import CapExceeded, DimensionMismatch, ParamOutOfRange
from .polyspace import (
    ENUM_CAP,
    TABLE_CAP,
    FunctionTable,
    ReducedPoly,
    Space,
    all_tables,
    distance_to_space,
    full_coefficients,
    point_digits,
    product_table,
    space,
)

P = 3
MATRIX_CAP = 4096
ENUMERATE_CAP = 3 ** 14


def eval_vector(x, n: int, d: int) -> np.ndarray:
    return space(n, d, P).eval_vector(x)


@dataclass(eq=False)
class QuadForm:
    beta: FunctionTable
    d: int
    matrix: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.beta.n

    @property
    def domain(self) -> Space:
        return space(self.n, self.d, P)

    @property
    def shift(self) -> int:
        """``<beta, 1>``: the extra exponent contributed by the constant in p^2 + 1."""
        return int(self.beta.values.astype(np.int64).sum() % P)

    def value(self, coeffs) -> int:
        c = np.asarray(coeffs, dtype=np.int64)
        return int(c @ self.matrix.astype(np.int64) @ c % P)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "beta": self.beta.to_string(), "rank": rank(self.matrix, P)}


def quad_matrix_from_syndrome(syn, n: int, d: int) -> np.ndarray:
    """Q with ``Q[a, b] = syn[index of x^a x^b]``, ``syn`` taken over P^n_{2d}."""
    sd = space(n, d, P)
    idx = product_table(sd, sd, space(n, 2 * d, P))
    return np.asarray(syn, dtype=np.uint8)[..., idx]


def build_quadform(beta: FunctionTable, n: int, d: int, cap: int = MATRIX_CAP) -> QuadForm:
    if beta.p != P or beta.n != n:
        raise DimensionMismatch("beta must be a table on F_3^n")
    sd = space(n, d, P)
    if sd.dim > cap:
        raise CapExceeded(f"quadratic form over {sd}", sd.dim, cap)
    syn = space(n, 2 * d, P).syndrome(beta.values)
    return QuadForm(beta, d, quad_matrix_from_syndrome(syn, n, d))


def direct_quadform(beta: FunctionTable, d: int) -> np.ndarray:
    """``sum_x beta(x) e_x e_x^T`` summed literally; an independent oracle for tests."""
    sd = space(beta.n, d, P)
    acc = np.zeros((sd.dim, sd.dim), dtype=np.int64)
    for i, x in enumerate(point_digits(beta.n, P)):
        if beta.values[i]:
            e = sd.eval_vector(x).astype(np.int64)
            acc += int(beta.values[i]) * np.outer(e, e)
    return (acc % P).astype(np.uint8)


def rank_and_kernel(q: QuadForm):
    """``(rank, kernel)`` with kernel vectors as polynomials of P^n_d."""
    sd = q.domain
    ker = kernel_basis(q.matrix, P) if sd.dim else np.zeros((0, 0), dtype=np.uint8)
    return sd.dim - ker.shape[0], [ReducedPoly(sd, row) for row in ker]


def coset_distance(beta: FunctionTable, d: int, cap: int = ENUM_CAP) -> int:
    """Delta_d(beta): distance of beta from P^n_{2n-2d-1}."""
    n = beta.n
    return distance_to_space(beta, space(n, 2 * n - 2 * d - 1, P), cap=cap)


def _high_part_matrix(beta_values, n: int, d: int, k: int) -> np.ndarray:
    """Linear map q -> (coefficients of q*beta above degree 2n-2d-1+k), batched over beta."""
    sk = space(n, k, P)
    gens = sk.generator_tables.astype(np.int64)
    b = np.asarray(beta_values, dtype=np.int64)
    prods = b[..., None, :] * gens  # (..., dim_k, 3^n)
    full = full_coefficients(prods % P, n, P)
    deg = point_digits(n, P).sum(axis=1)
    high = np.flatnonzero(deg > 2 * n - 2 * d - 1 + k)
    m = full[..., high]  # (..., dim_k, #high)
    return np.swapaxes(m, -1, -2).astype(np.uint8)


def b_space_basis(beta: FunctionTable, n: int, d: int, k: int) -> list:
    """Basis of ``{q in P^n_k : q beta in P^n_{2n-2d-1+k}}``."""
    if beta.p != P or beta.n != n:
        raise DimensionMismatch("beta must be a table on F_3^n")
    if P ** n > TABLE_CAP:
        raise CapExceeded("table size", P ** n, TABLE_CAP)
    sk = space(n, k, P)
    m = _high_part_matrix(beta.values, n, d, k)
    ker = kernel_basis(m, P) if m.shape[0] else np.eye(sk.dim, dtype=np.uint8)
    return [ReducedPoly(sk, row) for row in ker]


# --------------------------------------------------------------------------
# distribution of p^T Q p


def diagonalize(matrix) -> list:
    """Diagonal of a form congruent to the symmetric ``matrix`` over F_3."""
    m = np.asarray(matrix, dtype=np.int64) % P
    if not np.array_equal(m, m.T):
        raise ParamOutOfRange("quadratic form matrix must be symmetric")
    diag = []
    while m.shape[0]:
        if not m.any():
            diag.extend([0] * m.shape[0])
            break
        nzd = np.flatnonzero(np.diag(m))
        if nzd.size == 0:
            i, j = map(int, np.argwhere(m)[0])
            m[i, :] = (m[i, :] + m[j, :]) % P
            m[:, i] = (m[:, i] + m[:, j]) % P
            piv = i
        else:
            piv = int(nzd[0])
        order = [piv] + [r for r in range(m.shape[0]) if r != piv]
        m = m[np.ix_(order, order)]
        a = int(m[0, 0])
        inv_a = a  # units of F_3 are involutions
        f = (m[1:, 0] * inv_a) % P
        rest = (m[1:, 1:] - np.outer(f, m[0, 1:])) % P
        diag.append(a)
        m = rest
    return diag


_SQUARE_LAW = {0: (Fraction(1), Fraction(0), Fraction(0)), 1: (Fraction(1, 3), Fraction(2, 3), Fraction(0)), 2: (Fraction(1, 3), Fraction(0), Fraction(2, 3))}


def _convolve(a, b):
    return tuple(sum(a[i] * b[(t - i) % P] for i in range(P)) for t in range(P))


def statistical_distance(probs) -> Fraction | float:
    third = Fraction(1, 3) if all(isinstance(x, Fraction) for x in probs) else 1 / 3
    return sum(abs(x - third) for x in probs) / 2


@dataclass
class QuadDistribution:
    probs: tuple
    distance: object
    mode: str
    shift: int
    samples: int = 0
    stderr: tuple = ()

    def to_json(self) -> dict:
        out = {"mode": self.mode, "shift": self.shift, "probs": [str(x) if isinstance(x, Fraction) else float(x) for x in self.probs]}
        out["distance"] = str(self.distance) if isinstance(self.distance, Fraction) else float(self.distance)
        if self.samples:
            out["samples"] = self.samples
            out["stderr"] = [float(x) for x in self.stderr]
        return out

    def expectation_of_omega(self) -> complex:
        """``E[omega**X]`` for the distributed variable X."""
        w = np.exp(2j * np.pi / P)
        return complex(sum(float(pr) * w ** t for t, pr in enumerate(self.probs)))


def _shift_of(q, offset: int) -> int:
    if isinstance(q, QuadForm):
        return (int(offset) * q.shift) % P
    return int(offset) % P


def quad_distribution(q, offset: int = 0, mode: str = "exact", samples: int = 100_000, rng=None) -> QuadDistribution:
    """Distribution of ``p^T Q p + shift`` for p uniform over F_3^dim.

    For a :class:`QuadForm` the shift is ``offset * sum(beta)``, so offset 1
    gives the exponent of ``chi_beta(p^2 + 1)``; for a bare matrix the shift
    is ``offset`` itself. Modes: ``exact`` (diagonalize and convolve),
    ``enumerate`` (every p) and ``montecarlo``.
    """
    mat = q.matrix if isinstance(q, QuadForm) else np.asarray(q, dtype=np.int64) % P
    shift = _shift_of(q, offset)
    dim = mat.shape[0]
    if mode == "exact":
        dist = (Fraction(1), Fraction(0), Fraction(0))
        for a in diagonalize(mat):
            dist = _convolve(dist, _SQUARE_LAW[a])
        probs = tuple(dist[(t - shift) % P] for t in range(P))
        return QuadDistribution(probs, statistical_distance(probs), mode, shift)
    if mode == "enumerate":
        if P ** dim > ENUMERATE_CAP:
            raise CapExceeded("quadratic form enumeration", P ** dim, ENUMERATE_CAP)
        vecs = _all_vectors(dim)
        vals = (np.einsum("ij,jk,ik->i", vecs, mat.astype(np.int64), vecs) + shift) % P
        counts = np.bincount(vals, minlength=P)
        probs = tuple(Fraction(int(c), P ** dim) for c in counts)
        return QuadDistribution(probs, statistical_distance(probs), mode, shift)
    if mode == "montecarlo":
        rng = rng if rng is not None else np.random.default_rng(0)
        vecs = rng.integers(0, P, size=(samples, dim)).astype(np.int64)
        vals = (np.einsum("ij,jk,ik->i", vecs, mat.astype(np.int64), vecs) + shift) % P
        freq = np.bincount(vals, minlength=P) / samples
        err = tuple(np.sqrt(freq * (1 - freq) / samples))
        probs = tuple(float(x) for x in freq)
        return QuadDistribution(probs, float(statistical_distance(probs)), mode, shift, samples, err)
    raise ParamOutOfRange(f"unknown mode {mode!r}")


def _all_vectors(dim: int) -> np.ndarray:
    idx = np.arange(P ** dim, dtype=np.int64)
    return (idx[:, None] // (P ** np.arange(dim, dtype=np.int64))[None, :]) % P


def diagonal_form(entries) -> np.ndarray:
    return np.diag(np.asarray(entries, dtype=np.int64) % P).astype(np.uint8)


# --------------------------------------------------------------------------
# brute-force Phi


def coset_distances_all(n: int, d: int) -> np.ndarray:
    """Delta_d(beta) for every table beta on F_3^n (row order of all_tables)."""
    tabs = all_tables(n, P)
    wide = space(n, 2 * d, P)  # dual of P^n_{2n-2d-1}
    weight = np.count_nonzero(tabs, axis=1)
    if wide.dim == P ** n:  # the target space is {0}
        return weight
    syn = wide.syndrome(tabs).astype(np.int64) @ (P ** np.arange(wide.dim, dtype=np.int64))
    best = np.full(P ** wide.dim, np.iinfo(np.int64).max)
    np.minimum.at(best, syn, weight)
    return best[syn]


def phi_bruteforce(d: int, k: int, D: int, n_max: int, cap: int = TABLE_CAP):
    """``min dim(P^n_k / B^n_{d,k}(beta))`` over d/2 < n <= n_max and beta with Delta > D.

    Returns None when no table meets the distance constraint.
    """
    if n_max > 2:
        raise CapExceeded("phi brute force table enumeration", P ** (P ** n_max), cap)
    best = None
    for n in range(d // 2 + 1, n_max + 1):
        if P ** (P ** n) > cap:
            raise CapExceeded("phi brute force table enumeration", P ** (P ** n), cap)
        tabs = all_tables(n, P)
        keep = coset_distances_all(n, d) > D
        if not keep.any():
            continue
        mats = _high_part_matrix(tabs[keep], n, d, k)
        if mats.shape[1] == 0:
            val = 0
        else:
            val = int(rank_batch(mats, P).min())
        best = val if best is None else min(best, val)
    return best
