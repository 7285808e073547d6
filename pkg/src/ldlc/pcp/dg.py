"""Monte Carlo estimate of ``E_g |E_h chi_gamma(g h)|`` over F2.

``g`` ranges over P^n_{d/4} and ``h`` over P^n_{3d/4}. Since
``chi_gamma(g h) = (-1)^{<gamma g, h>}``, the inner average only depends on
the syndrome of ``gamma * g`` against P^n_{3d/4}: it is exactly 1 when that
syndrome vanishes and 0 otherwise. Both the sampled inner average and this
exact value are offered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import CapExceeded, ParamOutOfRange
from ..polyspace import ENUM_CAP, FunctionTable, distance_to_space, space, tables_of
from ..rng import stream

DG_LANE = 2


def theorem_bound(d: int) -> float:
    """``2^(-4 * 2^(d/4))``, the ceiling promised for far ``gamma``."""
    return 2.0 ** (-4 * 2 ** (d / 4))


def far_threshold(d: int) -> float:
    return 2.0 ** (d / 2)


@dataclass
class DgEstimate:
    estimate: float
    stderr: float
    ci95: tuple
    g_samples: int
    h_samples: int | None
    inner: str
    distance: int | None
    far: bool | None
    bound: float

    @property
    def bound_not_refuted(self) -> bool:
        return self.estimate - 2 * self.stderr < self.bound

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "ci95": list(self.ci95),
            "g_samples": self.g_samples,
            "h_samples": self.h_samples,
            "inner": self.inner,
            "distance_to_dual": self.distance,
            "far": self.far,
            "theorem_bound": self.bound,
            "bound_not_refuted": self.bound_not_refuted,
        }


def certify_distance(gamma: FunctionTable, n: int, d: int, cap: int = ENUM_CAP) -> int:
    """Hamming distance from ``gamma`` to the dual of P^n_d (which is P^n_{n-d-1})."""
    return distance_to_space(gamma, space(n, n - d - 1, 2), cap)


def dg_correlation_estimate(gamma: FunctionTable, n: int, d: int, g_samples: int = 1000, h_samples: int = 1000,
                            seed: int = 0, inner: str = "montecarlo", certify: bool = True,
                            cap: int = ENUM_CAP, batch: int = 256) -> DgEstimate:
    """Nested estimate; ``inner="exact"`` replaces the h-average by its exact 0/1 value."""
    if gamma.p != 2 or gamma.n != n:
        raise ParamOutOfRange("gamma must be a table on F2^n")
    if d % 4 or d < 0:
        raise ParamOutOfRange("d must be a non-negative multiple of 4")
    if g_samples < 2 or (inner == "montecarlo" and h_samples < 1):
        raise ParamOutOfRange("need at least two g samples and one h sample")
    if inner not in ("montecarlo", "exact"):
        raise ParamOutOfRange(f"unknown inner mode {inner!r}")
    dist = certify_distance(gamma, n, d, cap) if certify else None
    far = None if dist is None else dist >= far_threshold(d)
    gsp, hsp = space(n, d // 4, 2), space(n, 3 * d // 4, 2)
    gtab = gsp.generator_tables.astype(np.int64)
    htab_t = hsp.generator_tables.T.astype(np.int64)
    gam = gamma.values.astype(np.int64)
    vals = np.empty(g_samples, dtype=float)
    for lo in range(0, g_samples, batch):
        hi = min(lo + batch, g_samples)
        rngs = [stream(seed, t, DG_LANE) for t in range(lo, hi)]
        G = np.stack([r.integers(0, 2, gsp.dim) for r in rngs]).astype(np.int64)
        syn = ((G @ gtab % 2) * gam) @ htab_t % 2  # syndrome of gamma * g, one row per g
        if inner == "exact":
            vals[lo:hi] = ~syn.any(axis=1)
            continue
        for k, r in enumerate(rngs):
            H = r.integers(0, 2, (h_samples, hsp.dim), dtype=np.uint8).astype(np.int64)
            par = H @ syn[k] % 2
            vals[lo + k] = abs(1.0 - 2.0 * par.mean())
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(g_samples))
    return DgEstimate(est, se, (est - 1.96 * se, est + 1.96 * se), g_samples,
                      h_samples if inner == "montecarlo" else None, inner, dist, far, theorem_bound(d))


def random_far_gamma(n: int, d: int, seed: int = 0, tries: int = 100) -> FunctionTable:
    """A random table certified to be at least ``2^(d/2)`` from the dual of P^n_d."""
    for t in range(tries):
        vals = stream(seed, t, DG_LANE + 1).integers(0, 2, 2 ** n, dtype=np.uint8)
        g = FunctionTable(n, 2, vals)
        if certify_distance(g, n, d) >= far_threshold(d):
            return g
    raise ParamOutOfRange("no far gamma found; increase tries")


def dual_element(n: int, d: int, seed: int = 0) -> FunctionTable:
    """A random element of the dual of P^n_d (a table of P^n_{n-d-1})."""
    sd = space(n, n - d - 1, 2)
    coeffs = stream(seed, 0, DG_LANE + 2).integers(0, 2, sd.dim, dtype=np.uint8)
    if sd.dim == 0:
        return FunctionTable(n, 2, np.zeros(2 ** n, dtype=np.uint8))
    return FunctionTable(n, 2, tables_of(coeffs[None, :], sd)[0])


def dg_exact(gamma: FunctionTable, n: int, d: int, cap: int = 1 << 20):
    """The nested expectation itself: the fraction of g in P^n_{d/4} with ``gamma * g`` orthogonal to P^n_{3d/4}."""
    gsp, hsp = space(n, d // 4, 2), space(n, 3 * d // 4, 2)
    if gsp.size > cap:
        raise CapExceeded(f"enumeration of {gsp}", gsp.size, cap)
    G = gsp.elements(cap).astype(np.int64)
    syn = ((G @ gsp.generator_tables.astype(np.int64) % 2) * gamma.values.astype(np.int64)) @ hsp.generator_tables.T.astype(np.int64) % 2
    return Fraction(int((~syn.any(axis=1)).sum()), gsp.size)
