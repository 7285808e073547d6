"""Fourier-side checks of the correlations the soundness analysis expands.

Both checks compute one side by brute force over the query variables and
the other from spectra, and report the residual between them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import exact
from ..errors import CapExceeded, DimensionMismatch
from ..fourier import character_space, sign_table, spectrum
from ..polyspace import ENUM_CAP, Space, multiply, substitution_map
from ..quadform import quad_distribution, quad_matrix_from_syndrome

IDENTITY_CAP = 1 << 16
TRIPLE_CAP = 1 << 22


@dataclass
class IdentityResult:
    lhs: object
    rhs: object
    residual: float
    exact_mode: bool

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return {"num": x.numerator, "den": x.denominator}
            if isinstance(x, complex):
                return {"re": x.real, "im": x.imag}
            return x

        return {"lhs": enc(self.lhs), "rhs": enc(self.rhs), "residual": self.residual, "exact": self.exact_mode}


def block_table(proof, block_id: int, cap: int = IDENTITY_CAP) -> np.ndarray:
    """Colors of one block read at every element of its ambient space (the lift)."""
    block = proof.context.blocks[block_id]
    if block.paired:
        raise DimensionMismatch("identity checks take single-query blocks")
    sp = block.ambient
    if sp.size > cap:
        raise CapExceeded(f"lift of block {block.owner}", sp.size, cap)
    elems = sp.elements(cap)
    idx = block.ideal.quotient.index(elems)
    table = proof.tables[block_id]
    return np.array([table.value_at(block, int(i)) for i in np.atleast_1d(idx)], dtype=np.int64)


def autocorrelation_check(colors, sd: Space, eta, exact_mode: bool = True, cap: int = IDENTITY_CAP) -> IdentityResult:
    """``E_e[A(e) A(e+eta)]`` against ``sum_beta A^(beta)^2 chi_beta(eta)`` for ``A = (-1)^colors`` on F2 spaces.

    In exact mode both sides are rationals with denominator ``|P|``.
    """
    if sd.p != 2:
        raise DimensionMismatch("the autocorrelation check is over F2")
    if sd.size > cap:
        raise CapExceeded(f"autocorrelation over {sd}", sd.size, cap)
    colors = np.asarray(colors, dtype=np.int64) % 2
    if colors.shape != (sd.size,):
        raise DimensionMismatch(f"{colors.shape[0]} colors for |P| = {sd.size}")
    eta = np.asarray(eta, dtype=np.int64) % 2
    shift = int(sd.element_index(eta))
    signs = 1 - 2 * colors
    idx = np.arange(sd.size, dtype=np.int64)
    lhs_int = int(np.dot(signs, signs[idx ^ shift]))
    # chi_s(eta) = (-1)^{s . eta} with s read in element order
    s_dot = np.bitwise_count(idx & shift) if hasattr(np, "bitwise_count") else _popcount(idx & shift)
    chi = 1 - 2 * (s_dot.astype(np.int64) % 2)
    if exact_mode:
        S = spectrum(signs, sd, exact_mode=True).raw[:, 0]
        rhs_int = int(np.dot(S * S, chi))
        lhs = Fraction(lhs_int, sd.size)
        rhs = Fraction(rhs_int, sd.size ** 2)
        return IdentityResult(lhs, rhs, float(abs(lhs - rhs)), True)
    S = spectrum(signs.astype(float), sd).raw.real / sd.size
    lhs = lhs_int / sd.size
    rhs = float(np.dot(S * S, chi))
    return IdentityResult(lhs, rhs, abs(lhs - rhs), False)


def _popcount(x):
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros_like(x)
    while x.any():
        out += x & 1
        x = x >> 1
    return out


def block_autocorrelation(proof, block_id: int, eta, exact_mode: bool = True) -> IdentityResult:
    block = proof.context.blocks[block_id]
    return autocorrelation_check(block_table(proof, block_id), block.ambient, eta, exact_mode)


def triple_correlation_check(colors_u, colors_v, low: Space, high_u: Space, high_v: Space, positions,
                             cap: int = TRIPLE_CAP) -> IdentityResult:
    """``E[A_u(g) A_u(p^2+1-g-f o pi) A_v(f)]`` against its Fourier expansion over F3.

    ``A = omega^colors``; ``g`` runs over ``high_u`` (degree 2d), ``f`` over
    ``high_v`` and ``p`` over ``low`` (degree d); ``positions[j]`` is the
    u-coordinate the j-th v-coordinate reads. The left side is exact
    (counts of each total color); the right side uses double precision with
    ``E_p chi_beta(p^2+1)`` obtained by enumerating the quadratic form of
    each character.
    """
    if not (low.p == high_u.p == high_v.p == 3):
        raise DimensionMismatch("the triple correlation check is over F3")
    if high_u.d != 2 * low.d or high_u.n != low.n or high_v.d != high_u.d:
        raise DimensionMismatch("need low = P_d, high spaces = P_2d on matching variables")
    work = high_u.size * high_v.size * low.size
    if work > cap:
        raise CapExceeded("triple correlation enumeration", work, cap)
    cu = np.asarray(colors_u, dtype=np.int64) % 3
    cv = np.asarray(colors_v, dtype=np.int64) % 3
    if cu.shape != (high_u.size,) or cv.shape != (high_v.size,):
        raise DimensionMismatch("color tables do not match the spaces")
    smap = substitution_map(high_v, high_u, tuple(int(q) for q in positions))
    w = 3 ** np.arange(high_u.dim, dtype=np.int64)

    # left side: tally total colors over every (p, f, g)
    G = high_u.elements(ENUM_CAP).astype(np.int64)
    F = high_v.elements(ENUM_CAP)
    Pl = low.elements(ENUM_CAP)
    sq = np.array([multiply(pc, low, pc, low, high_u) for pc in Pl], dtype=np.int64)
    sq[:, 0] += 1
    fpi = np.zeros((len(F), high_u.dim), dtype=np.int64)
    fpi[:, smap] = F
    counts = np.zeros(3, dtype=np.int64)
    for a in range(len(Pl)):
        base = (sq[a][None, :] - fpi) % 3  # one row per f
        for b in range(len(F)):
            gp = ((base[b][None, :] - G) % 3) @ w
            tot = (cu + cu[gp] + cv[b]) % 3
            counts += np.bincount(tot, minlength=3)
    n_all = len(Pl) * len(F) * len(G)
    lhs_pair = np.array([counts[0] - counts[2], counts[1] - counts[2]], dtype=np.int64)
    lhs = complex(exact.to_complex(lhs_pair, 3)) / n_all

    # right side: sum over characters of P_u (syndromes s)
    Su = spectrum(exact.omega_power(cu, 3), high_u, exact_mode=True)
    Sv = spectrum(exact.omega_power(cv, 3), high_v, exact_mode=True)
    au = Su.complex_coefficients()
    av = Sv.complex_coefficients()
    syn_u = character_space(high_u).syndrome_of_index
    wv = 3 ** np.arange(high_v.dim, dtype=np.int64)
    rhs = 0j
    for s in np.flatnonzero(np.abs(au) > 1e-12):
        syn = syn_u(int(s)).astype(np.int64)
        t = int((syn[smap] % 3) @ wv)
        if abs(av[t]) < 1e-15:
            continue
        q = quad_matrix_from_syndrome(syn, low.n, low.d)
        ep = quad_distribution(q, offset=int(syn[0]), mode="enumerate").expectation_of_omega()
        rhs += au[s] ** 2 * av[t] * ep
    return IdentityResult(lhs, complex(rhs), abs(lhs - rhs), False)
