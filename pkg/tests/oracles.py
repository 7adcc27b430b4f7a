"""Brute-force references that share no code path with latcal."""
import itertools

import numpy as np


def closure(n, pairs):
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        reach[a][b] = True
    changed = True
    while changed:
        changed = False
        for i, j, k in itertools.product(range(n), repeat=3):
            if reach[i][j] and reach[j][k] and not reach[i][k]:
                reach[i][k] = True
                changed = True
    return reach


def bounds(leq, x, y, upper=True):
    n = len(leq)
    if upper:
        common = [z for z in range(n) if leq[x][z] and leq[y][z]]
        return [u for u in common if all(leq[u][w] for w in common)]
    common = [z for z in range(n) if leq[z][x] and leq[z][y]]
    return [u for u in common if all(leq[w][u] for w in common)]


def is_lattice(leq):
    n = len(leq)
    return all(
        len(bounds(leq, x, y, True)) == 1 and len(bounds(leq, x, y, False)) == 1
        for x in range(n)
        for y in range(n)
    )


def antichains(leq):
    n = len(leq)
    count = 0
    for r in range(n + 1):
        for sub in itertools.combinations(range(n), r):
            if all(not leq[a][b] and not leq[b][a] for a, b in itertools.combinations(sub, 2)):
                count += 1
    return count


def downsets(leq):
    n = len(leq)
    out = []
    for r in range(n + 1):
        for sub in itertools.combinations(range(n), r):
            s = set(sub)
            if all(b in s for a in s for b in range(n) if leq[b][a]):
                out.append(frozenset(s))
    return out


def random_dag(rng, n_max=7, p=None):
    """Random poset on ``n`` labelled nodes as (labels, cover-ish pairs)."""
    n = int(rng.integers(1, n_max + 1))
    prob = rng.uniform(0.1, 0.7) if p is None else p
    perm = rng.permutation(n)
    labels = [f"e{k}" for k in perm]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < prob]
    return labels, pairs


def sum_rule_solve(lat, seed):
    """Solve the sum-rule system with v(bottom)=0 and the seed pinned; returns (values, rank)."""
    n = len(lat)
    rows, rhs = [], []
    e = np.eye(n)
    rows.append(e[lat.index[lat.bottom]])
    rhs.append(0.0)
    for j, s in seed.items():
        rows.append(e[lat.index[j]])
        rhs.append(s)
    for x, y in itertools.combinations(lat.elements, 2):
        row = e[lat.index[lat.join(x, y)]] + e[lat.index[lat.meet(x, y)]] - e[lat.index[x]] - e[lat.index[y]]
        rows.append(row)
        rhs.append(0.0)
    a = np.array(rows)
    sol, *_ = np.linalg.lstsq(a, np.array(rhs), rcond=None)
    return sol, np.linalg.matrix_rank(a)
