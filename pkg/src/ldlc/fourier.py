"""Characters of P^n_d, minimum-support coset leaders and spectra.

A character chi_beta of P^n_d depends only on the syndrome of beta, the
vector of inner products ``<beta, x^a>`` over the monomials of P^n_d. Spectra
are computed by a Fourier transform over the coefficient space F_p^dim and
are keyed by syndrome; the canonical key exposed to callers is the
minimum-support table with that syndrome.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import _kernels, exact
from .algebra import kernel_basis, solve
from .errors import CapExceeded, DimensionMismatch
from .polyspace import (
    ENUM_CAP,
    TABLE_CAP,
    FunctionTable,
    ReducedPoly,
    Space,
    all_tables,
    table_of,
)

TOL = 1e-9


def chi_exponent(beta: FunctionTable, f: ReducedPoly) -> int:
    """``<beta, f>`` mod p, the exponent of omega in chi_beta(f)."""
    if (beta.n, beta.p) != (f.n, f.p):
        raise DimensionMismatch("character and polynomial live on different domains")
    return int(np.dot(beta.values.astype(np.int64), table_of(f).values) % f.p)


def chi(beta: FunctionTable, f: ReducedPoly) -> complex:
    k = chi_exponent(beta, f)
    return 1.0 + 0j if k == 0 else complex(exact.omega(f.p) ** k)


def project_pushforward(beta: FunctionTable, pi) -> FunctionTable:
    """Fiber sums of ``beta`` along the projection ``x -> (x[pi[0]], x[pi[1]], ...)``."""
    pi = [int(q) for q in pi]
    n, p = beta.n, beta.p
    if len(set(pi)) != len(pi) or any(not 0 <= q < n for q in pi):
        raise DimensionMismatch(f"{pi} is not a coordinate projection of F_{p}^{n}")
    a = beta.values.astype(np.int64).reshape((p,) * n, order="F")
    drop = tuple(q for q in range(n) if q not in pi)
    a = a.sum(axis=drop) if drop else a
    kept = sorted(pi)
    a = np.transpose(a, [kept.index(q) for q in pi]) if pi else a
    return FunctionTable(len(pi), p, np.asarray(a).reshape(-1, order="F") % p)


class CharacterSpace:
    """Characters of P^n_d with lazily computed, memoized coset leaders."""

    def __init__(self, sd: Space, cap: int = ENUM_CAP):
        self.sd = sd
        self.n, self.d, self.p = sd.n, sd.d, sd.p
        self.cap = cap
        self._lock = threading.Lock()
        self._memo: dict[int, np.ndarray] = {}

    @property
    def dim(self) -> int:
        return self.sd.dim

    @property
    def size(self) -> int:
        return self.p ** self.dim

    @cached_property
    def _weights(self):
        return self.p ** np.arange(self.dim, dtype=np.int64)

    def syndrome(self, beta) -> np.ndarray:
        vals = beta.values if isinstance(beta, FunctionTable) else beta
        return self.sd.syndrome(vals)

    def syndrome_index(self, beta_or_syndrome) -> int:
        s = beta_or_syndrome
        if isinstance(s, FunctionTable) or np.shape(s)[-1:] == (self.p ** self.n,) and self.dim != self.p ** self.n:
            s = self.syndrome(s)
        return np.asarray(s, dtype=np.int64) @ self._weights

    def syndrome_of_index(self, idx: int) -> np.ndarray:
        return ((idx // self._weights) % self.p).astype(np.uint8)

    @cached_property
    def dual_basis(self) -> np.ndarray:
        if self.dim == 0:
            return np.eye(self.p ** self.n, dtype=np.uint8)
        return kernel_basis(self.sd.generator_tables, self.p)

    @cached_property
    def leader_table(self):
        """Leaders of every coset by enumerating all tables, or None if too many."""
        try:
            tabs = all_tables(self.n, self.p, cap=TABLE_CAP)
        except CapExceeded:
            return None
        N = tabs.shape[1]
        syn = self.syndrome_index(self.sd.syndrome(tabs)) if self.dim else np.zeros(len(tabs), dtype=np.int64)
        weight = np.count_nonzero(tabs, axis=1)
        lexkey = tabs.astype(np.int64) @ (self.p ** np.arange(N - 1, -1, -1, dtype=np.int64))
        order = np.lexsort((lexkey, weight, syn))
        first = np.ones(len(order), dtype=bool)
        first[1:] = syn[order][1:] != syn[order][:-1]
        chosen = order[first]
        out = np.empty((self.size, N), dtype=np.uint8)
        out[syn[chosen]] = tabs[chosen]
        return out

    def leader(self, syndrome_index: int) -> np.ndarray:
        """Minimum-support table with the given syndrome (lexicographic tie-break)."""
        lt = self.leader_table
        if lt is not None:
            return lt[syndrome_index]
        with self._lock:
            hit = self._memo.get(syndrome_index)
        if hit is not None:
            return hit
        k = self.dual_basis.shape[0]
        if self.p ** k > self.cap:
            raise CapExceeded("coset of the dual space", self.p ** k, self.cap)
        s = self.syndrome_of_index(syndrome_index)
        base = solve(self.sd.generator_tables, s, self.p)
        _, vec = _kernels.min_weight_coset(self.dual_basis, base, self.p)
        vec.setflags(write=False)
        with self._lock:
            self._memo[syndrome_index] = vec
        return vec

    def min_support_representative(self, beta: FunctionTable) -> FunctionTable:
        return FunctionTable(self.n, self.p, self.leader(int(self.syndrome_index(beta))))


@lru_cache(maxsize=None)
def character_space(sd: Space) -> CharacterSpace:
    return CharacterSpace(sd)


def min_support_representative(beta: FunctionTable, sd: Space) -> FunctionTable:
    if (beta.n, beta.p) != (sd.n, sd.p):
        raise DimensionMismatch("table and space differ in n or p")
    return character_space(sd).min_support_representative(beta)


# --------------------------------------------------------------------------
# transforms over F_p^dim


def _cube(a, p, dim, extra=0):
    return a.reshape((p,) * dim + a.shape[a.ndim - extra :]) if dim else a.reshape((1,) + a.shape[a.ndim - extra :])


def transform_exact(values, p: int, dim: int, inverse: bool = False) -> np.ndarray:
    """Unnormalized character transform in Z[omega].

    Forward: ``S(s) = sum_c A(c) omega**(-s.c)``; inverse uses ``+s.c``.
    ``values`` has shape ``(p**dim, 2)`` (exact pairs) and so does the result.
    """
    a = np.asarray(values, dtype=np.int64)
    shape = a.shape
    a = _cube(a, p, dim, extra=1)
    sign = 1 if inverse else -1
    for ax in range(dim):
        parts = [np.take(a, c, axis=ax) for c in range(p)]
        outs = []
        for s in range(p):
            acc = np.zeros_like(parts[0])
            for c in range(p):
                acc = acc + exact.mul_omega_power(parts[c], sign * s * c, p)
            outs.append(acc)
        a = np.stack(outs, axis=ax)
    return a.reshape(shape)


def transform_float(values, p: int, dim: int, inverse: bool = False) -> np.ndarray:
    a = np.asarray(values, dtype=np.complex128)
    if dim == 0:
        return a.copy()
    cube = a.reshape((p,) * dim)
    if p == 2:
        for ax in range(dim):
            x0, x1 = np.take(cube, 0, axis=ax), np.take(cube, 1, axis=ax)
            cube = np.stack([x0 + x1, x0 - x1], axis=ax)
        return cube.reshape(-1)
    if inverse:
        return (np.fft.ifftn(cube) * (p ** dim)).reshape(-1)
    return np.fft.fftn(cube).reshape(-1)


@dataclass
class Spectrum:
    """Fourier coefficients of a function on P^n_d.

    ``raw[s]`` is the unnormalized transform at syndrome index ``s``; the
    coefficient is ``raw[s] / p**dim``. In exact mode ``raw`` holds Z[omega]
    pairs and coefficients are reported with rational parts.
    """

    domain: Space
    raw: np.ndarray
    exact_mode: bool

    @property
    def p(self):
        return self.domain.p

    @property
    def norm(self) -> int:
        return self.p ** self.domain.dim

    @property
    def chars(self) -> CharacterSpace:
        return character_space(self.domain)

    def coefficient(self, beta):
        """Coefficient at a table or a syndrome index (complex, or exact pair/norm)."""
        idx = int(self.chars.syndrome_index(beta)) if isinstance(beta, FunctionTable) else int(beta)
        if self.exact_mode:
            return ExactCoefficient(tuple(int(x) for x in self.raw[idx]), self.norm, self.p)
        return complex(self.raw[idx] / self.norm)

    def complex_coefficients(self) -> np.ndarray:
        if self.exact_mode:
            return exact.to_complex(self.raw, self.p) / self.norm
        return self.raw / self.norm

    def sum_of_squares(self):
        """Sum of |coef|^2; a Fraction in exact mode."""
        if self.exact_mode:
            return Fraction(int(exact.norm(self.raw, self.p).sum()), self.norm ** 2)
        return float(np.sum(np.abs(self.raw) ** 2) / self.norm ** 2)

    def reconstruct(self):
        """Function values recovered from the coefficients (exact pairs or complex)."""
        d = self.domain.dim
        if self.exact_mode:
            back = transform_exact(self.raw, self.p, d, inverse=True)
            if (back % self.norm).any():
                raise ArithmeticError("inverse transform is not divisible by |P|")
            return back // self.norm
        return transform_float(self.raw, self.p, d, inverse=True) / self.norm

    def support(self) -> np.ndarray:
        """Syndrome indices with nonzero coefficient."""
        if self.exact_mode:
            return np.flatnonzero(~exact.is_zero(self.raw))
        return np.flatnonzero(np.abs(self.raw) / self.norm > TOL)

    def items(self):
        """``(leader_table, coefficient)`` for nonzero coefficients, by weight then lexicographically."""
        rows = []
        for s in self.support():
            lead = self.chars.leader(int(s))
            rows.append((int(np.count_nonzero(lead)), (lead + ord("0")).tobytes().decode(), int(s)))
        rows.sort()
        return [(FunctionTable(self.domain.n, self.p, self.chars.leader(s)), self.coefficient(s)) for _, _, s in rows]

    def to_json(self) -> list:
        out = []
        for beta, c in self.items():
            z = c.to_complex() if isinstance(c, ExactCoefficient) else c
            entry = {"beta_table": beta.to_string(), "re": float(z.real), "im": float(z.imag)}
            if isinstance(c, ExactCoefficient):
                entry["exact"] = c.to_json()
            out.append(entry)
        return out


@dataclass(frozen=True)
class ExactCoefficient:
    """``(a + b*omega) / denom`` with integers a, b."""

    pair: tuple
    denom: int
    p: int

    def to_complex(self) -> complex:
        return complex(exact.to_complex(np.array(self.pair), self.p)) / self.denom

    def norm(self) -> Fraction:
        return Fraction(int(exact.norm(np.array(self.pair), self.p)), self.denom ** 2)

    def is_zero(self) -> bool:
        return self.pair == (0, 0)

    def __eq__(self, other):
        if isinstance(other, ExactCoefficient):
            return self.p == other.p and all(
                Fraction(x, self.denom) == Fraction(y, other.denom) for x, y in zip(self.pair, other.pair)
            )
        if isinstance(other, (int, Fraction)):
            return self.pair[1] == 0 and Fraction(self.pair[0], self.denom) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, Fraction(self.pair[0], self.denom), Fraction(self.pair[1], self.denom)))

    def to_json(self):
        return {"a": str(Fraction(self.pair[0], self.denom)), "b": str(Fraction(self.pair[1], self.denom))}


def spectrum(A, sd: Space, exact_mode: bool = False, cap: int = ENUM_CAP) -> Spectrum:
    """Spectrum of ``A`` given as its full table over P^n_d (element order).

    In exact mode ``A`` must be integer-valued (shape ``(|P|,)``) or Z[omega]
    pairs (shape ``(|P|, 2)``).
    """
    if sd.size > cap:
        raise CapExceeded(f"spectrum over {sd}", sd.size, cap)
    A = np.asarray(A)
    if A.shape[0] != sd.size:
        raise DimensionMismatch(f"A has {A.shape[0]} entries, |P| = {sd.size}")
    if exact_mode:
        if not np.issubdtype(A.dtype, np.integer):
            raise TypeError("exact spectra need integer or Z[omega] input")
        pairs = A.astype(np.int64) if A.ndim == 2 else exact.from_int(A)
        return Spectrum(sd, transform_exact(pairs, sd.p, sd.dim), True)
    return Spectrum(sd, transform_float(A, sd.p, sd.dim), False)


def sign_table(colors, p: int) -> np.ndarray:
    """omega**color as exact pairs: the usual way to turn a coloring into a character-valued map."""
    return exact.omega_power(np.asarray(colors, dtype=np.int64), p)
