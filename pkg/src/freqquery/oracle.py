"""Independent checks for the exact engine.

Nothing here shares code with :mod:`freqquery.lp`: the LP below builds the
full constraint matrix, runs a dense floating-point tableau, prices by the
most negative reduced cost and breaks ratio ties lexicographically. SAT
counting is plain enumeration.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import InconsistentError, MalformedInputError, ResourceLimitError
from .model import Itemset, ItemsetFamily, FrequencyAssignment, as_itemset, check_aligned, \
    downward_closure
from .reduction import CnfFormula

SAT_LIMIT = 24
FLOAT_LP_LIMIT = 12
_EPS = 1e-10


def count_satisfying(formula: CnfFormula) -> int:
    """Number of assignments satisfying every clause, by full enumeration."""
    L = formula.variable_count
    if L > SAT_LIMIT:
        raise ResourceLimitError(f"{L} variables exceeds the enumeration limit {SAT_LIMIT}")
    t = np.arange(1 << L, dtype=np.int64)
    ok = np.ones(1 << L, dtype=bool)
    for clause in formula.clauses:
        sat = np.zeros(1 << L, dtype=bool)
        for lit in clause:
            bit = (t >> (abs(lit) - 1)) & 1
            sat |= bit == (1 if lit > 0 else 0)
        ok &= sat
    return int(ok.sum())


class FloatBounds(NamedTuple):
    lo: float
    hi: float


class _Tableau:
    """Dense tableau ``[A | I | b]`` with artificial columns for every row."""

    def __init__(self, A: np.ndarray, b: np.ndarray):
        m, n = A.shape
        self.m, self.n = m, n
        self.T = np.hstack([A, np.eye(m), b.reshape(-1, 1)]).astype(np.float64)
        self.basis = list(range(n, n + m))

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j

    def reduced_costs(self, c: np.ndarray) -> np.ndarray:
        cb = c[self.basis]
        return c - cb @ self.T[:, :-1]

    def leaving_row(self, j: int) -> int:
        col = self.T[:, j]
        rows = np.flatnonzero(col > _EPS)
        if rows.size == 0:
            return -1
        # Lexicographic rule on (b, B^-1) rows scaled by the pivot column.
        binv = self.T[:, self.n:self.n + self.m]
        keys = np.hstack([self.T[rows, -1:], binv[rows]]) / col[rows, None]
        cand = np.arange(rows.size)
        for c in range(keys.shape[1]):
            vals = keys[cand, c]
            best = vals.min()
            cand = cand[vals <= best + 1e-12]
            if cand.size == 1:
                break
        return int(rows[cand[0]])

    def run(self, c: np.ndarray, allowed: np.ndarray, max_iter: int) -> None:
        for _ in range(max_iter):
            d = self.reduced_costs(c)
            d[~allowed] = 0.0
            j = int(np.argmin(d))
            if d[j] >= -1e-9:
                return
            r = self.leaving_row(j)
            if r < 0:
                raise RuntimeError("unbounded LP")
            self.pivot(r, j)
        raise RuntimeError("float simplex exceeded its iteration limit")

    def solution(self) -> np.ndarray:
        x = np.zeros(self.n + self.m)
        x[self.basis] = self.T[:, -1]
        return x


def _system(family: ItemsetFamily, theta):
    K = family.attribute_count
    states = np.arange(1 << K)
    rows, rhs = [], []
    for member, value in zip(family, theta):
        rows.append(((states & member.mask) == member.mask).astype(np.float64))
        rhs.append(float(value))
    if Itemset() not in family:
        rows.append(np.ones(1 << K))
        rhs.append(1.0)
    return np.array(rows), np.array(rhs), states


def float_lp_bounds(family: ItemsetFamily, theta, query, *, max_iter: int = 100_000
                    ) -> FloatBounds:
    """Min and max frequency of ``query`` by a dense floating-point simplex."""
    theta = check_aligned(family, theta)
    K = family.attribute_count
    if K > FLOAT_LP_LIMIT:
        raise ResourceLimitError(f"K = {K} exceeds the dense oracle limit {FLOAT_LP_LIMIT}")
    query = as_itemset(query)
    if query.max_index >= K:
        raise MalformedInputError(f"query {query!r} does not fit K = {K}")
    A, b, states = _system(family, theta)
    m, n = A.shape
    tab = _Tableau(A, b)
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    everything = np.ones(n + m, dtype=bool)
    tab.run(c1, everything, max_iter)
    if tab.solution()[n:].sum() > 1e-8:
        raise InconsistentError("float LP: frequencies are inconsistent")
    for r in range(m):
        if tab.basis[r] >= n:
            nz = np.flatnonzero(np.abs(tab.T[r, :n]) > 1e-9)
            if nz.size:
                tab.pivot(r, int(nz[0]))
    structural = np.concatenate([np.ones(n, dtype=bool), np.zeros(m, dtype=bool)])
    hits = ((states & query.mask) == query.mask).astype(np.float64)
    out = []
    for sign in (1.0, -1.0):
        t = _Tableau.__new__(_Tableau)
        t.m, t.n, t.T, t.basis = tab.m, tab.n, tab.T.copy(), list(tab.basis)
        t.run(np.concatenate([sign * hits, np.zeros(m)]), structural, max_iter)
        out.append(float(hits @ t.solution()[:n]))
    return FloatBounds(lo=out[0], hi=out[1])


def random_consistent_instance(attribute_count: int, rng: random.Random, *,
                               max_support: int = 6, max_seeds: int = 4,
                               max_size: int = 3) -> tuple:
    """``(family, theta, query)`` with theta taken from a random rational distribution."""
    K = attribute_count
    support = rng.sample(range(1 << K), rng.randint(1, min(max_support, 1 << K)))
    weights = [rng.randint(1, 9) for _ in support]
    total = sum(weights)
    mass = {s: Fraction(w, total) for s, w in zip(support, weights)}

    def random_itemset():
        size = rng.randint(1, min(max_size, K))
        return Itemset(rng.sample(range(K), size))

    seeds = [random_itemset() for _ in range(rng.randint(1, max_seeds))]
    family = downward_closure(seeds, K)
    theta = FrequencyAssignment(
        sum((v for s, v in mass.items() if s & f.mask == f.mask), Fraction(0))
        for f in family)
    return family, theta, random_itemset()


def random_singleton_instance(attribute_count: int, rng: random.Random,
                              denominator: int = 20) -> tuple:
    """Family ``{∅, a_1, ..., a_K}`` with random rational frequencies."""
    K = attribute_count
    family = ItemsetFamily([Itemset()] + [Itemset.of(i) for i in range(K)], K)
    theta = FrequencyAssignment(
        [1] + [Fraction(rng.randint(0, denominator), denominator) for _ in range(K)])
    return family, theta
