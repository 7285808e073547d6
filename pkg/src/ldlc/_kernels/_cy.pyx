# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels; contracts match ``_py.py``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long)


cdef inline int _inv(int x, int p) noexcept nogil:
    # only p in {2, 3} is supported: every nonzero element is its own inverse
    return x


def rref_inplace(unsigned char[:, ::1] m, int p):
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef int f, s
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                m[r, j], m[k, j] = m[k, j], m[r, j]
        s = _inv(m[r, c], p)
        if s != 1:
            for j in range(c, cols):
                m[r, j] = (m[r, j] * s) % p
        for i in range(rows):
            if i == r:
                continue
            f = m[i, c]
            if f == 0:
                continue
            f = p - f
            for j in range(c, cols):
                if m[r, j]:
                    m[i, j] = (m[i, j] + f * m[r, j]) % p
        pivots.append(c)
        r += 1
    return pivots


cdef inline uint64_t _pack(const unsigned char[::1] v) noexcept:
    # coordinate 0 becomes the most significant bit, so numeric order is lex order
    cdef Py_ssize_t n = v.shape[0], i
    cdef uint64_t x = 0
    for i in range(n):
        x = (x << 1) | (v[i] & 1)
    return x


def _min_weight_gf2_packed(const unsigned char[:, ::1] gens, const unsigned char[::1] offset, bint exclude_zero):
    cdef Py_ssize_t k = gens.shape[0], n = offset.shape[0], t, j
    cdef uint64_t cur = _pack(offset), best = 0
    cdef int w, best_w = -1
    cdef uint64_t total = (<uint64_t>1) << k
    cdef uint64_t s
    cdef uint64_t[64] g
    for j in range(k):
        g[j] = _pack(gens[j])
    if not exclude_zero:
        best_w = __builtin_popcountll(cur)
        best = cur
    for s in range(1, total):
        j = 0
        while ((s >> j) & 1) == 0:
            j += 1
        cur ^= g[j]
        w = __builtin_popcountll(cur)
        if best_w < 0 or w < best_w or (w == best_w and cur < best):
            best_w = w
            best = cur
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    if best_w >= 0:
        for t in range(n):
            o[t] = (best >> (n - 1 - t)) & 1
    return best_w, (out if best_w >= 0 else None)


def min_weight_coset(gens, offset, int p, bint exclude_zero=False):
    gens = np.ascontiguousarray(gens, dtype=np.uint8)
    offset = np.ascontiguousarray(offset, dtype=np.uint8)
    cdef Py_ssize_t k = gens.shape[0], n = offset.shape[0]
    if p == 2 and n <= 64 and k < 63:
        return _min_weight_gf2_packed(gens, offset, exclude_zero)
    cdef const unsigned char[:, ::1] G = gens
    cur_arr = offset.copy()
    best_arr = offset.copy()
    cdef unsigned char[::1] cur = cur_arr
    cdef unsigned char[::1] best = best_arr
    cdef int w = 0, best_w = -1, old, new, cmp
    cdef Py_ssize_t i, j
    cdef uint64_t s, q, total = 1
    for i in range(k):
        total *= p
    for i in range(n):
        if cur[i]:
            w += 1
    if not exclude_zero:
        best_w = w
    for s in range(1, total):
        q = s
        j = 0
        while q % p == 0:
            q //= p
            j += 1
        for i in range(n):
            if G[j, i]:
                old = cur[i]
                new = (old + G[j, i]) % p
                cur[i] = new
                w += (new != 0) - (old != 0)
        if best_w >= 0 and w > best_w:
            continue
        if best_w >= 0 and w == best_w:
            cmp = 0
            for i in range(n):
                if cur[i] != best[i]:
                    cmp = -1 if cur[i] < best[i] else 1
                    break
            if cmp >= 0:
                continue
        best_w = w
        for i in range(n):
            best[i] = cur[i]
    return best_w, (best_arr if best_w >= 0 else None)


def poly_mul(const unsigned char[::1] a, const unsigned char[::1] b, const int[:, ::1] idx, int p, Py_ssize_t out_dim):
    out_arr = np.zeros(out_dim, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t i, j, na = a.shape[0], nb = b.shape[0]
    cdef int ai, t
    for i in range(na):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(nb):
            if b[j]:
                t = idx[i, j]
                out[t] = (out[t] + ai * b[j]) % p
    return out_arr


def rank_batch(mats, int p):
    mats = np.ascontiguousarray(mats, dtype=np.uint8)
    cdef Py_ssize_t t, nb = mats.shape[0]
    out = np.empty(nb, dtype=np.int64)
    for t in range(nb):
        work = mats[t].copy()
        out[t] = len(rref_inplace(work, p))
    return out
