"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Prints per-kernel timings for both backends and an end-to-end run (exact LP
bounds and MaxEnt fits on reduction instances) with each backend switched in.
"""

import argparse
import random
import time

import numpy as np

from freqquery import _pykernels, kernels
from freqquery.lp import query_bounds
from freqquery.maxent import fit_maxent
from freqquery.reduction import random_cnf, reduce_max_query

try:
    from freqquery import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def kernel_cases(k, rng):
    n = 1 << k
    masks = np.array([rng.randrange(1, n) for _ in range(40)], dtype=np.int64)
    coefs = np.array([rng.randrange(1, 1000) for _ in range(40)], dtype=np.int64)
    # base chosen so no state qualifies and the whole space is scanned
    base = -int(coefs.sum()) - 1
    empty = np.zeros(0, dtype=np.int64)
    q = np.random.default_rng(k).random(n)
    q /= q.sum()
    attrs = np.array(sorted(rng.sample(range(k), 3)), dtype=np.int64)
    target = np.full(8, 1 / 8)
    mask = int(masks[0])

    def scan(mod):
        return lambda: mod.scan_states(masks, coefs, base, 0, 0, n, False, empty, empty)

    def zeta(mod):
        return lambda: mod.superset_sums(q.copy(), k)

    def marg(mod):
        return lambda: mod.marginal_scale(q.copy(), attrs, target)

    def item(mod):
        return lambda: mod.itemset_scale(q.copy(), mask, 0.3, 1e-15)

    return [("scan_states", scan), ("superset_sums", zeta), ("marginal_scale", marg),
            ("itemset_scale", item)]


def use_backend(name):
    if name == "python":
        kernels._compiled, kernels._impl = None, _pykernels
    else:
        kernels._compiled, kernels._impl = compiled, compiled


def end_to_end(seed):
    rng = random.Random(seed)
    formulas = [random_cnf(rng.randint(4, 6), rng.randint(5, 8), rng) for _ in range(30)]
    instances = [reduce_max_query(f) for f in formulas]

    def run():
        for inst in instances:
            query_bounds(inst.family, inst.theta, inst.query)
            fit_maxent(inst.family, inst.theta, inst.query)
    return run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="12,16,20")
    args = ap.parse_args()
    if compiled is None:
        raise SystemExit("compiled extension not built; nothing to compare")

    rng = random.Random(0)
    print(f"{'kernel':<16}{'K':>4}{'cython s':>12}{'numpy s':>12}{'speedup':>10}")
    for k in (int(s) for s in args.sizes.split(",")):
        for name, make in kernel_cases(k, rng):
            tc = best_of(make(compiled), args.repeat)
            tp = best_of(make(_pykernels), args.repeat)
            print(f"{name:<16}{k:>4}{tc:>12.5f}{tp:>12.5f}{tp / tc:>10.1f}")

    saved = kernels._compiled, kernels._impl
    try:
        timings = {}
        for backend in ("cython", "python"):
            use_backend(backend)
            timings[backend] = best_of(end_to_end(1), max(1, args.repeat // 2))
    finally:
        kernels._compiled, kernels._impl = saved
    tc, tp = timings["cython"], timings["python"]
    print(f"\nend-to-end (30 reduction instances, LP bounds + MaxEnt): "
          f"cython {tc:.3f}s, numpy {tp:.3f}s, speedup {tp / tc:.1f}x")


if __name__ == "__main__":
    main()
