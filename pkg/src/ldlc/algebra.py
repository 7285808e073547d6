"""Exact linear algebra over F_2 and F_3.

Matrices and vectors are numpy ``uint8`` arrays holding residues in
``[0, p)``. Every routine returns fresh arrays; inputs are never mutated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CapExceeded, DimensionMismatch, ParamOutOfRange

PRIMES = (2, 3)


def check_prime(p: int) -> int:
    if p not in PRIMES:
        raise ParamOutOfRange(f"modulus must be 2 or 3, got {p}")
    return p


def inverse(x: int, p: int) -> int:
    """Multiplicative inverse in F_p (p in {2, 3}: every unit is an involution)."""
    x %= p
    if x == 0:
        raise ZeroDivisionError("0 has no inverse")
    return x


@dataclass(frozen=True)
class FieldElem:
    """A scalar of F_p. Mostly used at API edges and in property tests."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise DimensionMismatch("mixed moduli")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElem(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def inverse(self) -> "FieldElem":
        return FieldElem(inverse(self.value, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.p).inverse()

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def as_matrix(rows, p: int, cols: int | None = None) -> np.ndarray:
    """Coerce ``rows`` to a 2-D uint8 array reduced mod p."""
    check_prime(p)
    m = np.asarray(rows, dtype=np.int64)
    if m.size == 0:
        return np.zeros((0 if m.ndim < 2 else m.shape[0], cols or (m.shape[1] if m.ndim == 2 else 0)), dtype=np.uint8)
    if m.ndim == 1:
        m = m[None, :]
    return np.ascontiguousarray(m % p, dtype=np.uint8)


def rref(m, p: int):
    """Reduced row echelon form; returns ``(R, pivots)`` with zero rows dropped."""
    work = np.array(as_matrix(m, p), dtype=np.uint8, order="C", copy=True)
    pivots = _kernels.rref_inplace(work, p)
    return work[: len(pivots)].copy(), list(pivots)


def rank(m, p: int) -> int:
    m = as_matrix(m, p)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel_basis(m, p: int) -> np.ndarray:
    """Basis of the right kernel, one vector per row (shape ``(cols - rank, cols)``)."""
    m = as_matrix(m, p)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.uint8)
    r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.uint8)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, c in enumerate(piv):
            out[k, c] = (-int(r[i, f])) % p
    return out


def solve(m, b, p: int):
    """One solution x of ``m @ x = b`` or None when the system is inconsistent."""
    m = as_matrix(m, p)
    b = np.asarray(b, dtype=np.int64) % p
    rows, cols = m.shape
    if rows == 0:
        return np.zeros(cols, dtype=np.uint8)
    aug = np.concatenate([m, b.astype(np.uint8)[:, None]], axis=1)
    r, piv = rref(aug, p)
    if piv and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(piv):
        x[c] = r[i, cols]
    return x


def in_span(basis, vecs, p: int) -> np.ndarray:
    """Boolean per row of ``vecs``: does it lie in the row space of ``basis``?"""
    vecs = as_matrix(vecs, p)
    basis = as_matrix(basis, p, cols=vecs.shape[1])
    if basis.shape[0] == 0:
        return ~vecs.any(axis=1)
    red = Reducer(basis, p)
    return ~red.reduce(vecs).any(axis=1)


def same_span(a, b, p: int) -> bool:
    a = as_matrix(a, p)
    b = as_matrix(b, p, cols=a.shape[1])
    return bool(in_span(a, b, p).all() and in_span(b, a, p).all())


class Reducer:
    """Reduction modulo the row space of a matrix.

    ``reduce`` returns the lexicographically smallest element of ``v + span``
    (coordinate 0 most significant): the unique one vanishing on every pivot.
    """

    def __init__(self, basis, p: int, cols: int | None = None):
        basis = as_matrix(basis, p, cols=cols)
        self.p = p
        self.cols = basis.shape[1] if cols is None else cols
        if basis.shape[0]:
            self.rows, self.pivots = rref(basis, p)
        else:
            self.rows, self.pivots = np.zeros((0, self.cols), dtype=np.uint8), []
        self._rows64 = self.rows.astype(np.int64)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.pivots:
            return v.astype(np.uint8)
        coef = v[..., self.pivots]
        out = (v - coef @ self._rows64) % self.p
        return out.astype(np.uint8)


class QuotientMap:
    """Canonical coset labels for ``space / sub``.

    The representative of a coset is its lexicographically smallest member;
    cosets are numbered by the digits of that representative at the
    complement's pivot columns, ``index = sum(digit_i * p**i)``.
    """

    def __init__(self, sub_basis, p: int, cols: int, space_basis=None):
        check_prime(p)
        self.p = p
        self.cols = cols
        self.sub = Reducer(sub_basis, p, cols=cols)
        if space_basis is None:
            # whole coordinate space: unit vectors off the pivots are already reduced
            free = [c for c in range(cols) if c not in set(self.sub.pivots)]
            self.comp = np.zeros((len(free), cols), dtype=np.uint8)
            self.comp[np.arange(len(free)), free] = 1
            self.comp_pivots = free
        else:
            space = as_matrix(space_basis, p, cols=cols)
            if self.sub.dim and not in_span(space, self.sub.rows, p).all():
                raise DimensionMismatch("subspace is not contained in the space")
            comp = self.sub.reduce(space) if space.shape[0] else space
            if comp.shape[0] and comp.any():
                self.comp, self.comp_pivots = rref(comp, p)
            else:
                self.comp, self.comp_pivots = np.zeros((0, cols), dtype=np.uint8), []
        self._comp64 = self.comp.astype(np.int64)
        self._weights = None

    @property
    def dim(self) -> int:
        """Dimension of the quotient."""
        return len(self.comp_pivots)

    @property
    def size(self) -> int:
        return self.p ** self.dim

    def reduce(self, v):
        return self.sub.reduce(v)

    def digits(self, v):
        """Quotient coordinates of ``v`` (rows of a batch are handled too)."""
        return self.reduce(v)[..., self.comp_pivots]

    def key(self, v) -> bytes:
        """Hashable coset label, cheap even when the quotient is huge."""
        return self.digits(v).tobytes()

    def index(self, v):
        """Coset index; numpy int64 array for batches of small quotients, else int."""
        dig = self.digits(v)
        if self.dim * (self.p.bit_length()) < 62:
            if self._weights is None:
                self._weights = self.p ** np.arange(self.dim, dtype=np.int64)
            out = dig.astype(np.int64) @ self._weights
            return int(out) if np.ndim(out) == 0 else out
        if dig.ndim != 1:
            return [digits_to_int(row, self.p) for row in dig]
        return digits_to_int(dig, self.p)

    def representative(self, index: int) -> np.ndarray:
        if not 0 <= index < self.size:
            raise ParamOutOfRange(f"coset index {index} out of range")
        dig = int_to_digits(index, self.p, self.dim)
        return ((dig.astype(np.int64) @ self._comp64) % self.p).astype(np.uint8)

    def representatives(self, cap: int = 1 << 20) -> np.ndarray:
        """All representatives, row ``i`` being the coset with index ``i``."""
        if self.size > cap:
            raise CapExceeded("quotient representatives", self.size, cap)
        idx = np.arange(self.size, dtype=np.int64)
        dig = (idx[:, None] // (self.p ** np.arange(self.dim, dtype=np.int64))[None, :]) % self.p
        return ((dig @ self._comp64) % self.p).astype(np.uint8)


def digits_to_int(digits, p: int) -> int:
    """``sum(d_i * p**i)`` as a Python int (digit 0 least significant)."""
    digits = np.asarray(digits, dtype=np.uint8)
    if digits.size == 0:
        return 0
    s = "".join("012"[x] for x in digits[::-1])
    return int(s, p)


def int_to_digits(value: int, p: int, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.uint8)
    for i in range(length):
        if value == 0:
            break
        value, out[i] = divmod(value, p)
    return out


def quotient_representatives(space_basis, sub_basis, p: int, cap: int = 1 << 20):
    """Canonical coset representatives of ``span(space_basis) / span(sub_basis)``.

    Returns ``(reps, qmap)`` where ``reps[i]`` represents coset ``i`` and
    ``qmap.index(v)`` maps any space element to its coset index.
    """
    space = as_matrix(space_basis, p)
    cols = space.shape[1]
    qmap = QuotientMap(sub_basis, p, cols, space_basis=space)
    return qmap.representatives(cap), qmap


def rank_batch(mats, p: int) -> np.ndarray:
    mats = np.ascontiguousarray(np.asarray(mats, dtype=np.int64) % p, dtype=np.uint8)
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.asarray(_kernels.rank_batch(mats, p), dtype=np.int64)
