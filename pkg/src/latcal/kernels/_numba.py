"""Loop kernels compiled with numba; same contracts as ``_numpy``."""
import numpy as np
from numba import njit


@njit(cache=True)
def transitive_closure(adj):
    n = adj.shape[0]
    reach = np.zeros((n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            reach[i, j] = adj[i, j]
        reach[i, i] = True
    for k in range(n):
        for i in range(n):
            if reach[i, k]:
                for j in range(n):
                    if reach[k, j]:
                        reach[i, j] = True
    return reach


@njit(cache=True)
def transitive_reduction(leq):
    n = leq.shape[0]
    cov = np.zeros((n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i, j]:
                continue
            direct = True
            for k in range(n):
                if k != i and k != j and leq[i, k] and leq[k, j]:
                    direct = False
                    break
            cov[i, j] = direct
    return cov


@njit(cache=True)
def _lowest_bit(u):
    k = 0
    while (u >> np.uint64(k)) & np.uint64(1) == 0:
        k += 1
    return k


@njit(cache=True)
def bound_table(bits):
    n, n_words = bits.shape
    out = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        out[i, i] = i
        for j in range(i + 1, n):
            first = -1
            start = 0
            for w in range(n_words):
                u = bits[i, w] & bits[j, w]
                if u != 0:
                    first = w * 64 + _lowest_bit(u)
                    start = w
                    break
            if first < 0:
                continue
            ok = True
            for w in range(start, n_words):
                if (bits[i, w] & bits[j, w]) & ~bits[first, w] != 0:
                    ok = False
                    break
            if ok:
                out[i, j] = first
                out[j, i] = first
    return out


@njit(cache=True)
def _distributive_violation(join, meet):
    n = join.shape[0]
    for x in range(n):
        for y in range(n):
            mxy = meet[x, y]
            for z in range(n):
                if meet[x, join[y, z]] != join[mxy, meet[x, z]]:
                    return x, y, z
    return -1, -1, -1


def distributive_violation(join, meet):
    x, y, z = _distributive_violation(join, meet)
    return int(x), int(y), int(z)


@njit(cache=True)
def mobius_matrix(leq):
    n = leq.shape[0]
    mu = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        mu[x, x] = 1
        for y in range(x + 1, n):
            if not leq[x, y]:
                continue
            s = 0
            for z in range(x, y):
                if leq[x, z] and leq[z, y]:
                    s += mu[x, z]
            mu[x, y] = -s
    return mu


@njit(cache=True)
def _rel(a, b):
    d = abs(a - b)
    scale = max(1.0, max(abs(a), abs(b)))
    return d / scale


@njit(cache=True)
def _sum_rule(v, join, meet):
    n = v.shape[0]
    best = -1.0
    bi = -1
    bj = -1
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            r = abs(v[join[i, j]] + v[meet[i, j]] - v[i] - v[j])
            count += 1
            if r > best:
                best = r
                bi = i
                bj = j
    return max(best, 0.0), count, bi, bj


def sum_rule_residual(v, join, meet):
    best, count, i, j = _sum_rule(v, join, meet)
    return float(best), int(count), int(i), int(j)


@njit(cache=True)
def _chain(w, leq):
    n = w.shape[0]
    best = -1.0
    count = 0
    wx, wy, wz = -1, -1, -1
    for x in range(n):
        for y in range(n):
            if not leq[x, y]:
                continue
            b1 = w[x, y]
            if not np.isfinite(b1):
                continue
            for z in range(n):
                if not leq[y, z]:
                    continue
                a = w[x, z]
                b = b1 * w[y, z]
                if not (np.isfinite(a) and np.isfinite(b)):
                    continue
                r = _rel(a, b)
                count += 1
                if r > best:
                    best = r
                    wx, wy, wz = x, y, z
    return max(best, 0.0), count, wx, wy, wz


@njit(cache=True)
def _context_product(w, meet):
    n = w.shape[0]
    best = -1.0
    count = 0
    wx, wy, wz = -1, -1, -1
    for x in range(n):
        for y in range(n):
            mxy = meet[x, y]
            wyx = w[y, x]
            for z in range(n):
                lhs = w[meet[y, z], x]
                rhs = w[z, mxy] * wyx
                if not (np.isfinite(lhs) and np.isfinite(rhs)):
                    continue
                r = _rel(lhs, rhs)
                count += 1
                if r > best:
                    best = r
                    wx, wy, wz = x, y, z
    return max(best, 0.0), count, wx, wy, wz


@njit(cache=True)
def _contextual_sum(w, join, meet, context_ok):
    n = w.shape[0]
    best = -1.0
    count = 0
    wx, wy, wt = -1, -1, -1
    for x in range(n):
        for y in range(n):
            jxy = join[x, y]
            mxy = meet[x, y]
            for t in range(n):
                if not context_ok[t]:
                    continue
                lhs = w[jxy, t] + w[mxy, t]
                rhs = w[x, t] + w[y, t]
                if not (np.isfinite(lhs) and np.isfinite(rhs)):
                    continue
                r = _rel(lhs, rhs)
                count += 1
                if r > best:
                    best = r
                    wx, wy, wt = x, y, t
    return max(best, 0.0), count, wx, wy, wt


@njit(cache=True)
def _bayes(w, meet):
    n = w.shape[0]
    best = -1.0
    count = 0
    wm, wn, wt = -1, -1, -1
    for m in range(n):
        for k in range(n):
            for t in range(n):
                a = w[m, t]
                b = w[k, meet[m, t]]
                c = w[k, t]
                direct = w[m, meet[k, t]]
                if not (np.isfinite(a) and np.isfinite(b) and np.isfinite(c) and np.isfinite(direct)):
                    continue
                if c == 0:
                    continue
                q = a * b / c
                r = _rel(q, direct)
                count += 1
                if r > best:
                    best = r
                    wm, wn, wt = m, k, t
    return max(best, 0.0), count, wm, wn, wt


def _wrap3(res):
    best, count, a, b, c = res
    return float(best), int(count), (int(a), int(b), int(c))


def chain_residual(w, leq):
    return _wrap3(_chain(w, leq))


def context_product_residual(w, meet):
    return _wrap3(_context_product(w, meet))


def contextual_sum_residual(w, join, meet, context_ok):
    return _wrap3(_contextual_sum(w, join, meet, context_ok))


def bayes_residual(w, meet):
    return _wrap3(_bayes(w, meet))
