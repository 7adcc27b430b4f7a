"""Time the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--states 7 8 9] [--repeat 5]

Inputs are powerset lattices (2**k elements) with a random positive atom
seed. The numba column excludes compilation; each kernel is warmed once
before timing. Results from both backends are compared for equality.
"""
import argparse
import time

import numpy as np

from latcal.bivaluation import BiValuation
from latcal.builders import powerset_lattice
from latcal.kernels import _numba, _numpy
from latcal.poset import _pack_rows
from latcal.valuation import extend_from_irreducibles


def _best(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def _cases(lat, rng):
    seed = {j: float(rng.uniform(0.1, 1.0)) for j in lat.join_irreducibles()}
    v = extend_from_irreducibles(lat, seed)
    w = BiValuation(v).matrix()
    leq, join, meet = lat.leq_matrix, lat.join_table, lat.meet_table
    adj = np.ascontiguousarray(lat.cover_matrix)
    ctx = np.ones(len(lat), dtype=bool)
    ctx[lat.bottom_index] = False
    return [
        ("transitive_closure", (adj,)),
        ("transitive_reduction", (np.ascontiguousarray(leq),)),
        ("bound_table", (_pack_rows(np.ascontiguousarray(leq)),)),
        ("distributive_violation", (join, meet)),
        ("sum_rule_residual", (np.ascontiguousarray(v.values), join, meet)),
        ("chain_residual", (w, leq)),
        ("context_product_residual", (w, meet)),
        ("contextual_sum_residual", (w, join, meet, ctx)),
    ]


def _same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return a == b


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, nargs="+", default=[6, 7, 8])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<26}{'n':>6}{'numpy s':>12}{'numba s':>12}{'speedup':>9}  agree")
    for k in args.states:
        lat = powerset_lattice([f"s{i}" for i in range(k)], max_elements=1 << k)
        for name, inputs in _cases(lat, rng):
            t_np, out_np = _best(getattr(_numpy, name), inputs, args.repeat)
            t_nb, out_nb = _best(getattr(_numba, name), inputs, args.repeat)
            speedup = t_np / t_nb if t_nb > 0 else float("inf")
            agree = "yes" if _same(out_np, out_nb) else "NO"
            print(f"{name:<26}{len(lat):>6}{t_np:>12.5f}{t_nb:>12.5f}{speedup:>8.1f}x  {agree}")


if __name__ == "__main__":
    main()
