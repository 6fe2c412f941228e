"""Itemset instances built from CNF formulas.

Attribute layout: ``v_1 .. v_L`` occupy indices ``0 .. L-1``, the clause
items ``c_1 .. c_M`` follow at ``L .. L+M-1``, and in consistency mode a
final item ``c_0`` sits at index ``L+M``.

The generated frequencies are those of the *construction distribution*:
variables uniform and independent, each clause item equal to the truth value
of its clause. For that distribution the query ``c_1 ... c_M`` has maximal
frequency above zero exactly when the formula is satisfiable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import MalformedInputError
from .model import DEFAULT_K_LIMIT, FrequencyAssignment, Itemset, ItemsetFamily, \
    JointDistribution, check_k_limit, downward_closure

MAX_QUERY = "max-query"
CONSISTENT = "consistent"


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula with clauses of one to three literals.

    Literals use DIMACS signs: ``3`` is ``v_3`` and ``-3`` is its negation.
    """

    variable_count: int
    clauses: tuple

    def __init__(self, variable_count: int, clauses: Sequence[Sequence[int]]):
        if not isinstance(variable_count, int) or variable_count < 0:
            raise MalformedInputError(f"invalid variable count {variable_count!r}")
        norm = []
        for i, clause in enumerate(clauses):
            clause = tuple(int(lit) for lit in clause)
            if not clause:
                raise MalformedInputError(f"clause {i + 1} is empty")
            if len(clause) > 3:
                raise MalformedInputError(
                    f"clause {i + 1} has {len(clause)} literals; at most 3 are supported")
            if len(set(clause)) != len(clause):
                raise MalformedInputError(f"clause {i + 1} repeats a literal")
            for lit in clause:
                if lit == 0 or abs(lit) > variable_count:
                    raise MalformedInputError(
                        f"clause {i + 1}: literal {lit} outside 1..{variable_count}")
            norm.append(clause)
        object.__setattr__(self, "variable_count", variable_count)
        object.__setattr__(self, "clauses", tuple(norm))

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def clause_value(self, i: int, assignment: int) -> bool:
        """Truth of clause ``i`` under ``assignment`` (bit ``j`` is ``v_{j+1}``)."""
        return any(bool(assignment >> (abs(lit) - 1) & 1) == (lit > 0)
                   for lit in self.clauses[i])

    def satisfied_by(self, assignment: int) -> bool:
        return all(self.clause_value(i, assignment) for i in range(len(self.clauses)))

    def clause_variables(self, i: int) -> tuple:
        return tuple(sorted({abs(lit) - 1 for lit in self.clauses[i]}))


@dataclass(frozen=True)
class ReductionInstance:
    family: ItemsetFamily
    theta: FrequencyAssignment
    query: Optional[Itemset]
    attribute_names: tuple
    threshold: Optional[Fraction]
    mode: str

    @property
    def attribute_count(self) -> int:
        return self.family.attribute_count


def attribute_names(formula: CnfFormula, *, with_c0: bool = False) -> tuple:
    names = [f"v{j + 1}" for j in range(formula.variable_count)]
    names += [f"c{i + 1}" for i in range(formula.clause_count)]
    if with_c0:
        names.append("c0")
    return tuple(names)


def _check_size(formula: CnfFormula, extra: int, k_limit: int) -> None:
    if formula.variable_count < 1 or formula.clause_count < 1:
        raise MalformedInputError("the formula needs at least one variable and one clause")
    check_k_limit(formula.variable_count + formula.clause_count + extra, k_limit)


def _member_frequency(formula: CnfFormula, member: Itemset) -> Fraction:
    L = formula.variable_count
    var_mask = member.mask & ((1 << L) - 1)
    clause_items = [i - L for i in member.indices if i >= L]
    if not clause_items:
        return Fraction(1, 1 << len(member))
    # Seeds hold a single clause item, so so does every member of the closure.
    (ci,) = clause_items
    cvars = formula.clause_variables(ci)
    hits = 0
    for k in range(1 << len(cvars)):
        assignment = 0
        for j, v in enumerate(cvars):
            if k >> j & 1:
                assignment |= 1 << v
        if assignment & var_mask == var_mask and formula.clause_value(ci, assignment):
            hits += 1
    return Fraction(hits, 1 << len(cvars))


def reduce_max_query(formula: CnfFormula, *, k_limit: int = DEFAULT_K_LIMIT
                     ) -> ReductionInstance:
    """Family, frequencies and query ``c_1...c_M`` encoding satisfiability.

    The formula is satisfiable iff the maximal frequency of the query exceeds 0.
    """
    _check_size(formula, 0, k_limit)
    L, M = formula.variable_count, formula.clause_count
    seeds = []
    for i in range(M):
        seeds.append(Itemset(formula.clause_variables(i) + (L + i,)))
    family = downward_closure(seeds, L + M)
    theta = FrequencyAssignment(_member_frequency(formula, f) for f in family)
    query = Itemset(range(L, L + M))
    return ReductionInstance(family, theta, query, attribute_names(formula),
                             Fraction(0), MAX_QUERY)


def reduce_consistent(formula: CnfFormula, *, k_limit: int = DEFAULT_K_LIMIT
                      ) -> ReductionInstance:
    """Instance whose frequencies are consistent iff the formula is satisfiable.

    Extends :func:`reduce_max_query` with an item ``c_0`` and the members
    ``{c_0}`` and ``{c_0, c_i}``, all at frequency ``2^-L``.
    """
    _check_size(formula, 1, k_limit)
    base = reduce_max_query(formula, k_limit=k_limit)
    L, M = formula.variable_count, formula.clause_count
    c0 = L + M
    extra = [Itemset.of(c0)] + [Itemset.of(L + i, c0) for i in range(M)]
    weight = Fraction(1, 1 << L)
    family = ItemsetFamily(list(base.family) + extra, L + M + 1)
    theta = FrequencyAssignment(list(base.theta) + [weight] * len(extra))
    return ReductionInstance(family, theta, None, attribute_names(formula, with_c0=True),
                             None, CONSISTENT)


def construction_distribution(formula: CnfFormula, *, k_limit: int = DEFAULT_K_LIMIT
                              ) -> JointDistribution:
    """Uniform variables with each clause item fixed to its clause's truth value."""
    L, M = formula.variable_count, formula.clause_count
    check_k_limit(L + M, k_limit)
    weight = Fraction(1, 1 << L)
    mass = {}
    for t in range(1 << L):
        state = t
        for i in range(M):
            if formula.clause_value(i, t):
                state |= 1 << (L + i)
        mass[state] = weight
    return JointDistribution(mass, L + M, exact=True)


def random_cnf(variable_count: int, clause_count: int, rng: random.Random,
               width: int = 3) -> CnfFormula:
    """Random formula; each clause picks ``min(width, L)`` distinct variables."""
    w = min(width, variable_count)
    clauses = []
    for _ in range(clause_count):
        vars_ = rng.sample(range(1, variable_count + 1), w)
        clauses.append([v if rng.random() < 0.5 else -v for v in vars_])
    return CnfFormula(variable_count, clauses)
