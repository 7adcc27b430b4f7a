"""Vectorized numpy implementations of the hot kernels.

Every function here has a twin in ``_numba`` with the same signature and the
same tie-breaking: witnesses are the lexicographically first tuple (in index
order) attaining the maximum residual.
"""
import numpy as np

NO_TUPLE = (-1, -1, -1)


def transitive_closure(adj):
    reach = adj.astype(bool, copy=True)
    np.fill_diagonal(reach, True)
    for k in range(reach.shape[0]):
        reach |= reach[:, k : k + 1] & reach[k : k + 1, :]
    return reach


def transitive_reduction(leq):
    lt = leq.copy()
    np.fill_diagonal(lt, False)
    # float32 matmul goes through BLAS; path counts stay exact below 2**24
    m = lt.astype(np.float32)
    two_step = (m @ m) > 0
    return lt & ~two_step


def bound_table(bits):
    """Least upper bounds from packed up-set rows.

    ``bits[i]`` is the bitset of elements above ``i``; elements must be
    indexed along a linear extension so the lowest common bit is the only
    candidate for the least bound. Entries are -1 where no unique bound
    exists.
    """
    n, n_words = bits.shape
    out = np.full((n, n), -1, dtype=np.int64)
    rows = np.arange(n)
    for i in range(n):
        ub = bits[i][None, :] & bits
        nz = ub != 0
        has = nz.any(axis=1)
        wi = nz.argmax(axis=1)
        word = ub[rows, wi]
        low = word & (~word + np.uint64(1))
        bit = np.bitwise_count(low - np.uint64(1)).astype(np.int64)
        first = wi.astype(np.int64) * 64 + bit
        first = np.where(has, first, 0)
        stray = (ub & ~bits[first]) != 0
        ok = has & ~stray.any(axis=1)
        out[i] = np.where(ok, first, -1)
    return out


def distributive_violation(join, meet):
    n = join.shape[0]
    for x in range(n):
        lhs = meet[x][join]
        mx = meet[x]
        rhs = join[mx[:, None], mx[None, :]]
        bad = lhs != rhs
        if bad.any():
            flat = int(bad.argmax())
            return x, flat // n, flat % n
    return NO_TUPLE


def mobius_matrix(leq):
    """Möbius function for a poset indexed along a linear extension."""
    n = leq.shape[0]
    lt = leq.astype(np.int64)
    np.fill_diagonal(lt, 0)
    mu = np.zeros((n, n), dtype=np.int64)
    for y in range(n):
        mu[:, y] = -(mu[:, :y] @ lt[:y, y])
        mu[y, y] = 1
    return mu


def _first_max(r, valid):
    count = int(valid.sum())
    if count == 0:
        return 0.0, 0, -1
    r = np.where(valid, r, -1.0)
    k = int(r.argmax())
    return float(r.flat[k]), count, k


def _rel(a, b):
    diff = np.abs(a - b)
    return diff / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


def sum_rule_residual(v, join, meet):
    n = v.shape[0]
    i, j = np.triu_indices(n, 1)
    r = np.abs(v[join[i, j]] + v[meet[i, j]] - v[i] - v[j])
    best, count, k = _first_max(r, np.ones(r.shape, bool))
    if k < 0:
        return best, count, -1, -1
    return best, count, int(i[k]), int(j[k])


def _unravel(k, n):
    if k < 0:
        return NO_TUPLE
    return k // (n * n), (k // n) % n, k % n


def chain_residual(w, leq):
    n = w.shape[0]
    best, count, wit = -1.0, 0, NO_TUPLE
    for x in range(n):
        # r[y, z] for x <= y <= z
        valid = leq[x][:, None] & leq
        a = w[x][None, :]
        b = w[x][:, None] * w
        valid &= np.isfinite(a) & np.isfinite(b)
        with np.errstate(invalid="ignore"):
            r = _rel(a, b)
        rb, c, k = _first_max(r, valid)
        count += c
        if c and rb > best:
            best, wit = rb, (x, k // n, k % n)
    return max(best, 0.0), count, wit


def context_product_residual(w, meet):
    n = w.shape[0]
    best, count, wit = -1.0, 0, NO_TUPLE
    for x in range(n):
        # r[y, z]: w(y^z | x) against w(z | x^y) * w(y | x)
        lhs = w[meet, x]
        rhs = w[np.arange(n)[None, :], meet[x][:, None]] * w[:, x][:, None]
        valid = np.isfinite(lhs) & np.isfinite(rhs)
        with np.errstate(invalid="ignore"):
            r = _rel(lhs, rhs)
        rb, c, k = _first_max(r, valid)
        count += c
        if c and rb > best:
            best, wit = rb, (x, k // n, k % n)
    return max(best, 0.0), count, wit


def contextual_sum_residual(w, join, meet, context_ok):
    n = w.shape[0]
    best, count, wit = -1.0, 0, NO_TUPLE
    for x in range(n):
        # r[y, t]
        lhs = w[join[x]] + w[meet[x]]
        rhs = w[x][None, :] + w
        valid = np.isfinite(lhs) & np.isfinite(rhs) & context_ok[None, :]
        with np.errstate(invalid="ignore"):
            r = _rel(lhs, rhs)
        rb, c, k = _first_max(r, valid)
        count += c
        if c and rb > best:
            best, wit = rb, (x, k // n, k % n)
    return max(best, 0.0), count, wit


def bayes_residual(w, meet):
    n = w.shape[0]
    best, count, wit = -1.0, 0, NO_TUPLE
    idx = np.arange(n)
    for m in range(n):
        # r[n_, t]: d(m|t) d(n|m^t) / d(n|t) against d(m | n^t)
        a = w[m][None, :]
        b = w[idx[:, None], meet[m][None, :]]
        c = w
        direct = w[m][meet]
        valid = np.isfinite(a) & np.isfinite(b) & np.isfinite(c) & np.isfinite(direct) & (c != 0)
        with np.errstate(invalid="ignore", divide="ignore"):
            q = a * b / c
            r = _rel(q, direct)
        rb, cnt, k = _first_max(r, valid)
        count += cnt
        if cnt and rb > best:
            best, wit = rb, (m, k // n, k % n)
    return max(best, 0.0), count, wit
