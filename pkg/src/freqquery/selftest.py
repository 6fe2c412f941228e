"""Cross-checks run by ``freqquery selftest``.

Each check compares the exact engine with something computed another way:
brute-force SAT counts, the dense floating-point LP, closed forms.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple

from .lp import check_consistent, decide_max_query, query_bounds
from .maxent import fit_maxent
from .model import Itemset, ItemsetFamily, downward_closure
from .oracle import count_satisfying, float_lp_bounds, random_consistent_instance, \
    random_singleton_instance
from .reduction import CnfFormula, random_cnf, reduce_consistent, reduce_max_query


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


def _intro():
    family = downward_closure([Itemset.of(0), Itemset.of(1)], 2)
    return family, [1, Fraction(3, 5), Fraction(1, 2)]


def _random_formulas(rng, count):
    return [random_cnf(rng.randint(1, 6), rng.randint(1, 8), rng) for _ in range(count)]


def run_selftest(count: int = 20, seed: int = 0) -> list:
    rng = random.Random(seed)
    rows = []

    family, theta = _intro()
    iv = query_bounds(family, theta, Itemset.of(0, 1))
    rows.append(Check("intro-interval", (iv.lo, iv.hi) == (Fraction(1, 10), Fraction(1, 2)),
                      f"[{iv.lo}, {iv.hi}]"))
    est = fit_maxent(family, theta, Itemset.of(0, 1)).query_frequency
    rows.append(Check("intro-maxent", abs(est - 0.3) <= 1e-6, f"{est:.12g}"))

    two = reduce_max_query(CnfFormula(3, [[1, 2], [-2, 3]]))
    hi = query_bounds(two.family, two.theta, two.query).hi
    rows.append(Check("two-clause-reduction", len(two.family) == 14 and hi == Fraction(1, 2),
                      f"{len(two.family)} members, hi = {hi}"))

    formulas = _random_formulas(rng, count)
    bad2 = bad4 = bad_me = 0
    for f in formulas:
        sat = count_satisfying(f)
        inst = reduce_max_query(f)
        bad2 += decide_max_query(inst.family, inst.theta, inst.query, 0) != (sat > 0)
        cons = reduce_consistent(f)
        bad4 += bool(check_consistent(cons.family, cons.theta)) != (sat > 0)
        r = fit_maxent(inst.family, inst.theta, inst.query)
        bad_me += not (r.converged
                       and abs(r.query_frequency - sat / 2 ** f.variable_count) <= 1e-6)
    rows.append(Check("sat-max-query", bad2 == 0, f"{count - bad2}/{count} agree"))
    rows.append(Check("sat-consistency", bad4 == 0, f"{count - bad4}/{count} agree"))
    rows.append(Check("sat-count-maxent", bad_me == 0, f"{count - bad_me}/{count} agree"))

    worst = 0.0
    for _ in range(count):
        family, theta, query = random_consistent_instance(rng.randint(2, 8), rng)
        iv = query_bounds(family, theta, query)
        fb = float_lp_bounds(family, theta, query)
        worst = max(worst, abs(float(iv.lo) - fb.lo), abs(float(iv.hi) - fb.hi))
    rows.append(Check("float-lp-agreement", worst <= 1e-7, f"max deviation {worst:.2e}"))

    bad1 = 0
    for _ in range(count):
        k = rng.randint(1, 8)
        family, theta = random_singleton_instance(k, rng)
        hi = query_bounds(family, theta, Itemset(range(k))).hi
        bad1 += hi != min(theta[1:])
    rows.append(Check("singleton-min-rule", bad1 == 0, f"{count - bad1}/{count} agree"))
    return rows
