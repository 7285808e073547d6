"""Reduced polynomials over F_p, their evaluation tables and the spaces P^n_d.

Conventions used everywhere in the package:

* Monomials are exponent vectors with entries ``<= p - 1``, ordered by total
  degree and, within a degree, by descending lexicographic order of the
  exponent vector (so ``1, x1, x2, x1^2, x1 x2, x2^2``).
* A function F_p^n -> F_p is a table of length ``p**n``; point ``x`` sits at
  ``sum(x_i * p**(i-1))`` (coordinate 1 is the least significant digit).
* An element of P^n_d is numbered ``sum(c_k * p**k)`` over its coefficient
  vector in monomial order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
import numpy as np

from . import _kernels
from .algebra import check_prime, kernel_basis, solve
from .errors import CapExceeded, DimensionMismatch, InterpolationFailure, ParamOutOfRange

TABLE_CAP = 1 << 20
ENUM_CAP = 1 << 25

# Vandermonde matrices V[x, e] = x**e mod p and their inverses.
_VANDER = {
    2: np.array([[1, 0], [1, 1]], dtype=np.int64),
    3: np.array([[1, 0, 0], [1, 1, 1], [1, 2, 1]], dtype=np.int64),
}
_VANDER_INV = {
    2: np.array([[1, 0], [1, 1]], dtype=np.int64),
    3: np.array([[1, 0, 0], [0, 2, 1], [2, 2, 2]], dtype=np.int64),
}


def reduce_exponent(e, p: int):
    """x**e as a reduced power: x**p == x, so exponents fold back into 1..p-1."""
    e = np.asarray(e, dtype=np.int64)
    return np.where(e == 0, 0, (e - 1) % (p - 1) + 1)


def _graded_order(exps: np.ndarray) -> np.ndarray:
    exps = exps.astype(np.int64)
    deg = exps.sum(axis=1)
    # lexsort: last key is primary. Descending lex within degree.
    keys = [-exps[:, j] for j in range(exps.shape[1] - 1, -1, -1)] + [deg]
    return np.lexsort(keys)


class Space:
    """The space P^n_d of reduced polynomials of total degree at most ``d``.

    ``d`` is clamped into ``[-1, (p-1) n]``; ``d = -1`` is the zero space.
    """

    def __init__(self, n: int, d: int, p: int):
        check_prime(p)
        if n < 0:
            raise ParamOutOfRange("n must be non-negative")
        self.n, self.p = int(n), int(p)
        self.requested_d = int(d)
        self.d = max(-1, min(int(d), (p - 1) * n))

    def __repr__(self):
        return f"Space(n={self.n}, d={self.d}, p={self.p})"

    def __eq__(self, other):
        return isinstance(other, Space) and (self.n, self.d, self.p) == (other.n, other.d, other.p)

    def __hash__(self):
        return hash((self.n, self.d, self.p))

    @property
    def max_degree(self) -> int:
        return (self.p - 1) * self.n

    @cached_property
    def exps(self) -> np.ndarray:
        """Exponent vectors, one row per monomial in the global order."""
        if self.d < 0:
            return np.zeros((0, self.n), dtype=np.uint8)
        exps = _all_exponents(self.n, self.p)
        exps = exps[exps.sum(axis=1) <= self.d]
        return np.ascontiguousarray(exps[_graded_order(exps)], dtype=np.uint8)

    @cached_property
    def dim(self) -> int:
        return int(self.exps.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.exps.sum(axis=1).astype(np.int64)

    @cached_property
    def keys(self) -> np.ndarray:
        """Exponent vectors read as base-p numbers, exponent of x1 least significant."""
        return self.exps.astype(np.int64) @ (self.p ** np.arange(self.n, dtype=np.int64))

    @cached_property
    def _lookup(self):
        if self.p ** self.n <= 1 << 24:
            arr = np.full(self.p ** self.n, -1, dtype=np.int64)
            arr[self.keys] = np.arange(self.dim)
            return arr
        return {int(k): i for i, k in enumerate(self.keys)}

    def index_of_keys(self, keys) -> np.ndarray:
        """Monomial positions for exponent keys (-1 when the monomial is not in the space)."""
        keys = np.asarray(keys, dtype=np.int64)
        lk = self._lookup
        if isinstance(lk, np.ndarray):
            return lk[keys]
        return np.vectorize(lambda k: lk.get(int(k), -1), otypes=[np.int64])(keys)

    def index_of(self, exponents) -> int:
        e = np.asarray(exponents, dtype=np.int64)
        if e.shape != (self.n,) or (e < 0).any() or (e >= self.p).any():
            raise DimensionMismatch(f"bad exponent vector {exponents}")
        return int(self.index_of_keys(e @ (self.p ** np.arange(self.n, dtype=np.int64))))

    @property
    def size(self) -> int:
        return self.p ** self.dim

    def element(self, index: int) -> np.ndarray:
        """Coefficient vector of the element numbered ``index``."""
        out = np.zeros(self.dim, dtype=np.uint8)
        for k in range(self.dim):
            index, out[k] = divmod(index, self.p)
        return out

    def elements(self, cap: int = ENUM_CAP) -> np.ndarray:
        """All elements as rows, row ``i`` being element ``i``."""
        if self.size > cap:
            raise CapExceeded(f"enumerate {self}", self.size, cap)
        idx = np.arange(self.size, dtype=np.int64)
        return ((idx[:, None] // (self.p ** np.arange(self.dim, dtype=np.int64))[None, :]) % self.p).astype(np.uint8)

    def element_index(self, coeffs):
        c = np.asarray(coeffs, dtype=np.int64)
        return c @ (self.p ** np.arange(self.dim, dtype=np.int64))

    def random(self, rng, size=None) -> np.ndarray:
        shape = (self.dim,) if size is None else (size, self.dim)
        return rng.integers(0, self.p, size=shape, dtype=np.uint8)

    def eval_vector(self, x) -> np.ndarray:
        """Values of every monomial at the point ``x``."""
        x = np.asarray(x, dtype=np.int64) % self.p
        if x.shape != (self.n,):
            raise DimensionMismatch(f"point of length {x.shape} for n={self.n}")
        vals = np.ones(self.dim, dtype=np.int64)
        v = _VANDER[self.p]
        for i in range(self.n):
            vals = vals * v[x[i], self.exps[:, i]] % self.p
        return vals.astype(np.uint8)

    @cached_property
    def generator_tables(self) -> np.ndarray:
        """Matrix whose row ``k`` is the table of monomial ``k``."""
        size = self.p ** self.n
        if size > TABLE_CAP or size * max(self.dim, 1) > 1 << 28:
            raise CapExceeded(f"tables of {self}", size, TABLE_CAP)
        pts = point_digits(self.n, self.p)
        g = np.ones((self.dim, size), dtype=np.int64)
        v = _VANDER[self.p]
        for i in range(self.n):
            g = g * v[pts[:, i][None, :], self.exps[:, i][:, None]] % self.p
        return g.astype(np.uint8)

    def syndrome(self, tables) -> np.ndarray:
        """Inner products of table(s) with every monomial: ``<beta, x^a>`` for all ``a``."""
        t = np.asarray(tables, dtype=np.int64)
        return (t @ self.generator_tables.T.astype(np.int64) % self.p).astype(np.uint8)

    def contains(self, other: "Space") -> bool:
        return self.n == other.n and self.p == other.p and other.d <= self.d

    def embed_from(self, other: "Space") -> np.ndarray:
        """Positions in this space of the monomials of a smaller space (prefix, by grading)."""
        if not self.contains(other):
            raise DimensionMismatch(f"{other} is not inside {self}")
        return np.arange(other.dim)

    def __contains__(self, item):
        if isinstance(item, FunctionTable):
            return total_degree(item) <= self.d
        if isinstance(item, ReducedPoly):
            return item.n == self.n and item.p == self.p and item.degree <= self.d
        return False


@lru_cache(maxsize=None)
def space(n: int, d: int, p: int) -> Space:
    """Shared, memoized Space instances."""
    return Space(n, d, p)


@lru_cache(maxsize=64)
def _all_exponents(n: int, p: int) -> np.ndarray:
    return point_digits(n, p)


@lru_cache(maxsize=64)
def point_digits(n: int, p: int) -> np.ndarray:
    """Row ``i`` holds the coordinates of point ``i`` (coordinate 1 first)."""
    size = p ** n
    if size > 1 << 24:
        raise CapExceeded(f"points of F_{p}^{n}", size, 1 << 24)
    idx = np.arange(size, dtype=np.int64)
    out = (idx[:, None] // (p ** np.arange(n, dtype=np.int64))[None, :]) % p
    out.setflags(write=False)
    return out.astype(np.uint8)


def point_index(x, p: int) -> int:
    x = np.asarray(x, dtype=np.int64)
    return int(x @ (p ** np.arange(x.shape[-1], dtype=np.int64)))


@lru_cache(maxsize=256)
def product_table(a: Space, b: Space, out: Space) -> np.ndarray:
    """``idx[i, j]`` = position in ``out`` of the reduced product of monomials i and j."""
    if not (a.n == b.n == out.n and a.p == b.p == out.p):
        raise DimensionMismatch("spaces differ in n or p")
    e = a.exps[:, None, :].astype(np.int64) + b.exps[None, :, :].astype(np.int64)
    e = reduce_exponent(e, a.p)
    keys = e @ (a.p ** np.arange(a.n, dtype=np.int64))
    idx = out.index_of_keys(keys.reshape(-1)).reshape(a.dim, b.dim)
    if (idx < 0).any():
        raise DimensionMismatch(f"products of {a} and {b} do not fit in {out}")
    return np.ascontiguousarray(idx, dtype=np.int32)


def multiply(a, sa: Space, b, sb: Space, out: Space) -> np.ndarray:
    """Coefficient vector of the product of two polynomials, inside ``out``."""
    idx = product_table(sa, sb, out)
    return _kernels.poly_mul(
        np.ascontiguousarray(a, dtype=np.uint8), np.ascontiguousarray(b, dtype=np.uint8), idx, sa.p, out.dim
    )


@lru_cache(maxsize=256)
def substitution_map(src: Space, dst: Space, positions: tuple) -> np.ndarray:
    """Monomial map for ``f(y) -> f(x[positions])``; ``positions[j]`` is where y_j lands."""
    if len(positions) != src.n or len(set(positions)) != src.n or src.p != dst.p:
        raise DimensionMismatch("substitution must be an injective coordinate map")
    if any(not 0 <= q < dst.n for q in positions):
        raise DimensionMismatch("substitution target out of range")
    e = np.zeros((src.dim, dst.n), dtype=np.int64)
    e[:, list(positions)] = src.exps
    idx = dst.index_of_keys(e @ (dst.p ** np.arange(dst.n, dtype=np.int64)))
    if (idx < 0).any():
        raise DimensionMismatch(f"{src} does not embed into {dst}")
    return idx


def substitute(coeffs, src: Space, dst: Space, positions) -> np.ndarray:
    out = np.zeros(dst.dim, dtype=np.uint8)
    out[substitution_map(src, dst, tuple(int(q) for q in positions))] = coeffs
    return out


# --------------------------------------------------------------------------
# value types


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """A function F_p^n -> F_p as its table of values."""

    n: int
    p: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_prime(self.p)
        v = np.asarray(self.values, dtype=np.int64)
        if v.shape != (self.p ** self.n,):
            raise DimensionMismatch(f"table of length {v.shape} for p^n = {self.p ** self.n}")
        v = (v % self.p).astype(np.uint8)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, n, p):
        return cls(n, p, np.zeros(p ** n, dtype=np.uint8))

    @classmethod
    def indicator(cls, point, p):
        n = len(point)
        v = np.zeros(p ** n, dtype=np.uint8)
        v[point_index(point, p)] = 1
        return cls(n, p, v)

    @classmethod
    def from_string(cls, s: str, p: int, n: int | None = None):
        s = s.strip()
        if n is None:
            n = round(math.log(len(s), p)) if s else 0
        if len(s) != p ** n or any(ch not in "012"[:p] for ch in s):
            raise DimensionMismatch(f"not a base-{p} table of length {p}^{n}: {s!r}")
        return cls(n, p, np.frombuffer(s.encode(), dtype=np.uint8) - ord("0"))

    def to_string(self) -> str:
        return (self.values + ord("0")).tobytes().decode()

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.values))

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.values)

    def __call__(self, x) -> int:
        return int(self.values[point_index(x, self.p)])

    def _check(self, other):
        if (self.n, self.p) != (other.n, other.p):
            raise DimensionMismatch("tables over different domains")

    def __add__(self, other):
        self._check(other)
        return FunctionTable(self.n, self.p, self.values.astype(np.int64) + other.values)

    def __sub__(self, other):
        self._check(other)
        return FunctionTable(self.n, self.p, self.values.astype(np.int64) - other.values)

    def __neg__(self):
        return FunctionTable(self.n, self.p, -self.values.astype(np.int64))

    def __mul__(self, other):
        if isinstance(other, FunctionTable):
            self._check(other)
            return FunctionTable(self.n, self.p, self.values.astype(np.int64) * other.values)
        return FunctionTable(self.n, self.p, self.values.astype(np.int64) * int(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, FunctionTable)
            and (self.n, self.p) == (other.n, other.p)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.n, self.p, self.values.tobytes()))

    def __repr__(self):
        s = self.to_string()
        return f"FunctionTable(p={self.p}, n={self.n}, {s if len(s) <= 40 else s[:37] + '...'})"


@dataclass(frozen=True, eq=False)
class ReducedPoly:
    """A reduced polynomial stored as a coefficient vector over a Space."""

    space: Space
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64)
        if c.shape != (self.space.dim,):
            raise DimensionMismatch(f"{c.shape[0] if c.ndim else 0} coefficients for {self.space}")
        c = (c % self.space.p).astype(np.uint8)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    n = property(lambda self: self.space.n)
    p = property(lambda self: self.space.p)
    degree_bound = property(lambda self: self.space.d)

    @classmethod
    def from_terms(cls, terms: dict, n: int, p: int, d: int | None = None):
        """Build from ``{exponent_tuple: coefficient}``."""
        if d is None:
            d = max((sum(e) for e, c in terms.items() if c % p), default=0)
        sp = space(n, d, p)
        c = np.zeros(sp.dim, dtype=np.int64)
        for e, v in terms.items():
            if any(x >= p for x in e):
                raise ParamOutOfRange(f"exponent {e} is not reduced mod {p}")
            if sum(e) > sp.d:
                if v % p:
                    raise ParamOutOfRange(f"monomial {e} exceeds degree {sp.d}")
                continue
            c[sp.index_of(e)] += v
        return cls(sp, c)

    @classmethod
    def zero(cls, sp: Space):
        return cls(sp, np.zeros(sp.dim, dtype=np.uint8))

    def terms(self) -> dict:
        nz = np.flatnonzero(self.coeffs)
        return {tuple(int(x) for x in self.space.exps[k]): int(self.coeffs[k]) for k in nz}

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(self.space.degrees[nz].max()) if nz.size else -1

    def in_space(self, sp: Space) -> "ReducedPoly":
        """The same polynomial written over another space of the same n and p."""
        if (sp.n, sp.p) != (self.n, self.p):
            raise DimensionMismatch("different n or p")
        if self.degree > sp.d:
            raise ParamOutOfRange(f"degree {self.degree} does not fit in {sp}")
        c = np.zeros(sp.dim, dtype=np.uint8)
        m = min(sp.dim, self.space.dim)
        c[:m] = self.coeffs[:m]
        return ReducedPoly(sp, c)

    def _common(self, other):
        if (self.n, self.p) != (other.n, other.p):
            raise DimensionMismatch("polynomials over different rings")
        sp = self.space if self.space.d >= other.space.d else other.space
        return self.in_space(sp), other.in_space(sp), sp

    def __add__(self, other):
        a, b, sp = self._common(other)
        return ReducedPoly(sp, a.coeffs.astype(np.int64) + b.coeffs)

    def __sub__(self, other):
        a, b, sp = self._common(other)
        return ReducedPoly(sp, a.coeffs.astype(np.int64) - b.coeffs)

    def __neg__(self):
        return ReducedPoly(self.space, -self.coeffs.astype(np.int64))

    def __mul__(self, other):
        if isinstance(other, ReducedPoly):
            if (self.n, self.p) != (other.n, other.p):
                raise DimensionMismatch("polynomials over different rings")
            out = space(self.n, self.space.d + other.space.d, self.p)
            return ReducedPoly(out, multiply(self.coeffs, self.space, other.coeffs, other.space, out))
        return ReducedPoly(self.space, self.coeffs.astype(np.int64) * int(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ReducedPoly) and (self.n, self.p) == (other.n, other.p) and self.terms() == other.terms()

    def __hash__(self):
        return hash((self.n, self.p, tuple(sorted(self.terms().items()))))

    def __call__(self, x) -> int:
        return evaluate(self, x)

    def __repr__(self):
        t = self.terms()
        if not t:
            return "0"
        parts = []
        for e, c in t.items():
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append((f"{c}*" if c != 1 and mono else ("" if mono else str(c))) + mono)
        return " + ".join(parts)


# --------------------------------------------------------------------------
# operations


def enumerate_monomials(n: int, d: int, p: int) -> list:
    """Reduced monomials of total degree at most ``d``, in the global order."""
    check_prime(p)
    if not 0 <= d <= (p - 1) * n:
        raise ParamOutOfRange(f"d={d} outside [0, {(p - 1) * n}]")
    return [tuple(int(x) for x in row) for row in space(n, d, p).exps]


def evaluate(f: ReducedPoly, x) -> int:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (f.n,):
        raise DimensionMismatch(f"point of shape {x.shape} for n={f.n}")
    return int(np.dot(f.space.eval_vector(x).astype(np.int64), f.coeffs) % f.p)


def _transform(flat, mat, n, p):
    """Apply ``mat`` along every axis of a batch of length-p^n vectors."""
    flat = np.asarray(flat, dtype=np.int64)
    lead = flat.shape[:-1]
    a = flat.reshape(lead + (p,) * n)
    for ax in range(len(lead), len(lead) + n):
        a = np.moveaxis(np.tensordot(mat, a, axes=([1], [ax])) % p, 0, ax)
    return a.reshape(lead + (p ** n,))


def full_coefficients(values, n: int, p: int) -> np.ndarray:
    """Coefficients of the unique reduced polynomial, indexed by exponent key."""
    return _transform(values, _VANDER_INV[p], n, p).astype(np.uint8)


def full_table(coeffs_by_key, n: int, p: int) -> np.ndarray:
    return _transform(coeffs_by_key, _VANDER[p], n, p).astype(np.uint8)


@lru_cache(maxsize=64)
def _key_degrees(n: int, p: int) -> np.ndarray:
    return point_digits(n, p).sum(axis=1).astype(np.int64)


def table_of(f: ReducedPoly) -> FunctionTable:
    if f.p ** f.n > TABLE_CAP:
        raise CapExceeded("table size", f.p ** f.n, TABLE_CAP)
    full = np.zeros(f.p ** f.n, dtype=np.int64)
    full[f.space.keys] = f.coeffs
    return FunctionTable(f.n, f.p, full_table(full, f.n, f.p))


def tables_of(coeffs, sp: Space) -> np.ndarray:
    """Batch version of :func:`table_of` on coefficient rows."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    return (coeffs @ sp.generator_tables.astype(np.int64) % sp.p).astype(np.uint8)


def poly_of(t: FunctionTable, d: int | None = None) -> ReducedPoly:
    """The unique reduced polynomial with table ``t`` (in P^n_d when ``d`` is given)."""
    full = full_coefficients(t.values, t.n, t.p)
    deg = _key_degrees(t.n, t.p)
    nz = np.flatnonzero(full)
    top = int(deg[nz].max()) if nz.size else 0
    if d is None:
        d = top
    elif nz.size and top > d:
        raise ParamOutOfRange(f"table has degree {top} > {d}")
    sp = space(t.n, d, t.p)
    return ReducedPoly(sp, full[sp.keys])


def total_degree(t: FunctionTable) -> int:
    full = full_coefficients(t.values, t.n, t.p)
    nz = np.flatnonzero(full)
    return int(_key_degrees(t.n, t.p)[nz].max()) if nz.size else -1


def total_degrees(values, n: int, p: int) -> np.ndarray:
    """Total degree of each table in a batch (rows), -1 for the zero table."""
    full = full_coefficients(values, n, p)
    deg = np.where(full != 0, _key_degrees(n, p), -1)
    return deg.max(axis=-1)


def dual_degree(n: int, d: int, p: int) -> int:
    return (p - 1) * n - d - 1


def dual_space_basis(sd: Space) -> list:
    """Basis of {g : <g, f> = 0 for all f in P^n_d}, as tables."""
    size = sd.p ** sd.n
    if size > TABLE_CAP:
        raise CapExceeded("dual space tables", size, TABLE_CAP)
    if sd.dim == 0:
        basis = np.eye(size, dtype=np.uint8)
    else:
        basis = kernel_basis(sd.generator_tables, sd.p)
    return [FunctionTable(sd.n, sd.p, row) for row in basis]


def distance_to_space(t: FunctionTable, sd: Space, cap: int = ENUM_CAP) -> int:
    """Exact Hamming distance from ``t`` to P^n_d (refuses beyond ``cap``)."""
    if (t.n, t.p) != (sd.n, sd.p):
        raise DimensionMismatch("table and space differ in n or p")
    if sd.size > cap:
        raise CapExceeded(f"distance to {sd}", sd.size, cap)
    w, _ = _kernels.min_weight_coset(sd.generator_tables, t.values, sd.p)
    return int(w)


def min_nonzero_weight(sd: Space, cap: int = ENUM_CAP) -> int:
    """Smallest support of a nonzero element of P^n_d, by exhaustive scan."""
    if sd.size > cap:
        raise CapExceeded(f"weight scan of {sd}", sd.size, cap)
    if sd.dim == 0:
        return -1
    zero = np.zeros(sd.p ** sd.n, dtype=np.uint8)
    w, _ = _kernels.min_weight_coset(sd.generator_tables, zero, sd.p, True)
    return int(w)


def sz_min_support_bound(sd: Space) -> int:
    """``ceil(p**(n - d/(p-1)))``, computed in exact integer arithmetic."""
    n, d, p = sd.n, sd.d, sd.p
    if d < 0:
        return p ** n
    if p == 2:
        return 2 ** (n - d)
    num = 3 ** (2 * n - d)  # 3^(n - d/2) = sqrt(3^(2n - d))
    r = math.isqrt(num)
    return r if r * r == num else r + 1


def interpolate_vanishing(X, target, d: int, n: int | None = None, p: int = 2) -> ReducedPoly:
    """A polynomial of degree at most ``(p-1) d`` agreeing with ``target`` on ``X``.

    ``X`` is a sequence of points, ``target`` maps each point (as a tuple) to
    its value. A solution exists whenever ``|X| <= p**d - 1``.
    """
    check_prime(p)
    pts = [tuple(int(c) % p for c in x) for x in X]
    if n is None:
        if not pts:
            raise ParamOutOfRange("n is required when X is empty")
        n = len(pts[0])
    if any(len(x) != n for x in pts):
        raise DimensionMismatch("points of mixed dimension")
    if len(set(pts)) != len(pts):
        raise InterpolationFailure("repeated point in X")
    if len(pts) > p ** d - 1:
        raise InterpolationFailure(f"|X| = {len(pts)} exceeds p^d - 1 = {p ** d - 1}")
    sp = space(n, (p - 1) * d, p)
    if not pts:
        return ReducedPoly.zero(sp)
    m = np.stack([sp.eval_vector(x) for x in pts])
    b = np.array([int(target[x]) % p for x in pts], dtype=np.int64)
    sol = solve(m, b, p)
    if sol is None:
        raise InterpolationFailure("no polynomial of the allowed degree fits the targets")
    return ReducedPoly(sp, sol)


def all_tables(n: int, p: int, cap: int = TABLE_CAP) -> np.ndarray:
    """Every function F_p^n -> F_p, row ``i`` being the table numbered ``i``."""
    size = p ** (p ** n)
    if size > cap:
        raise CapExceeded(f"all tables on F_{p}^{n}", size, cap)
    return point_digits(p ** n, p)
