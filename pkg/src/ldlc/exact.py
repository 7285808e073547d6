"""Exact arithmetic in Z[omega] for omega a primitive p-th root of unity.

An array of shape ``(..., 2)`` holds ``a + b*omega``. For p = 2 omega = -1
and the second component is always zero; for p = 3 omega**2 = -1 - omega.
"""
from __future__ import annotations

import cmath

import numpy as np


def omega(p: int) -> complex:
    return cmath.exp(2j * cmath.pi / p)


def from_int(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.int64)
    out = np.zeros(v.shape + (2,), dtype=np.int64)
    out[..., 0] = v
    return out


def omega_power(k, p: int) -> np.ndarray:
    """omega**k as an exact pair (broadcasts over ``k``)."""
    k = np.asarray(k, dtype=np.int64) % p
    out = np.zeros(k.shape + (2,), dtype=np.int64)
    if p == 2:
        out[..., 0] = np.where(k == 0, 1, -1)
    else:
        out[..., 0] = np.where(k == 0, 1, np.where(k == 1, 0, -1))
        out[..., 1] = np.where(k == 0, 0, np.where(k == 1, 1, -1))
    return out


def mul_omega_power(x, k, p: int) -> np.ndarray:
    """x * omega**k for a scalar shift ``k``."""
    x = np.asarray(x, dtype=np.int64)
    k %= p
    if k == 0:
        return x.copy()
    if p == 2:
        return -x
    a, b = x[..., 0], x[..., 1]
    if k == 1:  # (a + b w) w = -b + (a - b) w
        return np.stack([-b, a - b], axis=-1)
    return np.stack([b - a, -a], axis=-1)  # times w^2


def mul(x, y, p: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    a, b, c, d = x[..., 0], x[..., 1], y[..., 0], y[..., 1]
    if p == 2:
        return np.stack([a * c, np.zeros_like(a * c)], axis=-1)
    # (a + bw)(c + dw) = ac + (ad + bc) w + bd w^2, with w^2 = -1 - w
    return np.stack([a * c - b * d, a * d + b * c - b * d], axis=-1)


def conj(x, p: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if p == 2:
        return x.copy()
    a, b = x[..., 0], x[..., 1]  # conj(a + b w) = a + b w^2 = (a - b) - b w
    return np.stack([a - b, -b], axis=-1)


def norm(x, p: int) -> np.ndarray:
    """|x|^2, an integer."""
    x = np.asarray(x, dtype=np.int64)
    a, b = x[..., 0], x[..., 1]
    if p == 2:
        return a * a
    return a * a - a * b + b * b


def to_complex(x, p: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    return x[..., 0] + x[..., 1] * omega(p)


def is_zero(x) -> np.ndarray:
    return ~np.asarray(x).any(axis=-1)
