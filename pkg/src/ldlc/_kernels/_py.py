"""Pure numpy implementations of the hot kernels.

Every function here has a twin in ``_cy.pyx`` with an identical contract;
the package picks one at import time (see ``ldlc._kernels``).
"""
import numpy as np

_INV = {2: (0, 1), 3: (0, 1, 2)}

# Rows of the coefficient enumeration are produced in chunks of this many.
_CHUNK = 1 << 15


def rref_inplace(m, p):
    """Reduce ``m`` (uint8, C-contiguous) to reduced row echelon form mod p.

    Pivots are taken leftmost-first and scaled to 1. Returns the pivot
    columns in row order.
    """
    rows, cols = m.shape
    inv = _INV[p]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        if m[r, c] != 1:
            m[r] = (m[r].astype(np.int64) * inv[m[r, c]]) % p
        col = m[:, c].astype(np.int64)
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            upd = m[hit].astype(np.int64) - np.outer(col[hit], m[r].astype(np.int64))
            m[hit] = upd % p
        pivots.append(c)
        r += 1
    return pivots


def _lex_key(block):
    # Rows compared lexicographically, coordinate 0 most significant.
    return np.lexsort(block.T[::-1])


def min_weight_coset(gens, offset, p, exclude_zero=False):
    """Minimum Hamming weight over ``offset + span(gens)``.

    Ties are broken towards the lexicographically smallest vector. With
    ``exclude_zero`` the trivial combination (the offset itself) is skipped.
    Returns ``(weight, vector)``; weight is -1 if nothing was enumerated.
    """
    gens = np.asarray(gens, dtype=np.int64)
    offset = np.asarray(offset, dtype=np.int64)
    k = gens.shape[0]
    total = p ** k
    best_w = -1
    best_v = None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        digits = (idx[:, None] // (p ** np.arange(k, dtype=np.int64))[None, :]) % p
        vecs = (digits @ gens + offset[None, :]) % p if k else np.broadcast_to(offset, (idx.size, offset.size)) % p
        if exclude_zero and start == 0:
            vecs = vecs[1:]
            if vecs.shape[0] == 0:
                continue
        w = np.count_nonzero(vecs, axis=1)
        mw = int(w.min())
        if best_w != -1 and mw > best_w:
            continue
        cand = vecs[w == mw]
        cand = cand[_lex_key(cand)[0]]
        if best_w == -1 or mw < best_w or tuple(cand) < tuple(best_v):
            best_w = mw
            best_v = cand.astype(np.uint8)
    return best_w, best_v


def poly_mul(a, b, idx, p, out_dim):
    """Product of two coefficient vectors through a precomputed index table.

    ``idx[i, j]`` is the position of monomial_i * monomial_j (reduced) in the
    output monomial list.
    """
    ia = np.flatnonzero(a)
    ib = np.flatnonzero(b)
    if ia.size == 0 or ib.size == 0:
        return np.zeros(out_dim, dtype=np.uint8)
    w = np.outer(a[ia].astype(np.int64), b[ib].astype(np.int64)).ravel()
    out = np.bincount(idx[np.ix_(ia, ib)].ravel(), weights=w, minlength=out_dim)
    return (out.astype(np.int64) % p).astype(np.uint8)


def rank_batch(mats, p):
    """Ranks of a stack of matrices, shape (batch, rows, cols)."""
    out = np.empty(mats.shape[0], dtype=np.int64)
    for t in range(mats.shape[0]):
        out[t] = len(rref_inplace(np.ascontiguousarray(mats[t], dtype=np.uint8), p))
    return out
