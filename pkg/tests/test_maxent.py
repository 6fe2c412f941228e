import math
import random
from fractions import Fraction

import numpy as np
import pytest

from freqquery.errors import InconsistentError, MalformedInputError
from freqquery.lp import query_bounds
from freqquery.maxent import Decision, decide_entr_query, entropy, fit_maxent
from freqquery.model import Itemset, JointDistribution, downward_closure, satisfies
from freqquery.oracle import count_satisfying, random_singleton_instance
from freqquery.reduction import CnfFormula, construction_distribution, random_cnf, \
    reduce_max_query

AB = Itemset.of(0, 1)


class TestEntropy:
    def test_uniform(self):
        assert entropy(JointDistribution.uniform(3)) == pytest.approx(3 * math.log(2))

    def test_point_mass(self):
        assert entropy(JointDistribution.point_mass(5, 3)) == 0.0

    def test_float(self):
        p = JointDistribution(np.array([0.5, 0.25, 0.25, 0.0]), 2, exact=False)
        assert entropy(p) == pytest.approx(1.5 * math.log(2))


class TestFit:
    def test_intro_product(self, intro):
        family, theta = intro
        res = fit_maxent(family, theta, AB)
        assert res.converged
        assert res.query_frequency == pytest.approx(0.3, abs=1e-9)

    def test_singletons_are_independent(self):
        rng = random.Random(3)
        for _ in range(10):
            k = rng.randint(1, 6)
            family, theta = random_singleton_instance(k, rng)
            res = fit_maxent(family, theta, Itemset(range(k)))
            assert res.converged
            assert res.query_frequency == pytest.approx(
                math.prod(float(v) for v in theta[1:]), abs=1e-9)

    def test_member_query_reproduces_theta(self, two_clause_formula):
        inst = reduce_max_query(two_clause_formula)
        res = fit_maxent(inst.family, inst.theta)
        for member, value in zip(inst.family, inst.theta):
            assert res.frequency(member) == pytest.approx(float(value), abs=1e-9)
        assert satisfies(res.distribution, inst.family, inst.theta, tol=1e-9)

    def test_two_clause(self, two_clause_formula):
        inst = reduce_max_query(two_clause_formula)
        res = fit_maxent(inst.family, inst.theta, inst.query)
        assert res.query_frequency == pytest.approx(0.5, abs=1e-9)
        assert res.entropy == pytest.approx(3 * math.log(2), abs=1e-9)

    def test_itemset_method_agrees_on_intro(self, intro):
        family, theta = intro
        res = fit_maxent(family, theta, AB, method="itemset")
        assert res.converged
        assert res.query_frequency == pytest.approx(0.3, abs=1e-9)

    def test_itemset_method_zero_first(self):
        family = downward_closure([AB], 2)
        theta = [1, Fraction(1, 2), Fraction(1, 2), 0]
        res = fit_maxent(family, theta, AB, method="itemset", max_iter=200)
        assert res.query_frequency == 0.0
        # boundary solution (p(00) -> 0): the binary update only creeps towards it
        assert not res.converged
        full = fit_maxent(family, theta, AB)
        assert full.converged and full.query_frequency == 0.0

    def test_max_iter_exhausted_is_not_an_error(self):
        formula = random_cnf(5, 6, random.Random(2))
        inst = reduce_max_query(formula)
        res = fit_maxent(inst.family, inst.theta, inst.query, method="itemset", max_iter=1,
                         tol=1e-15)
        assert res.iterations == 1
        assert not res.converged

    def test_negative_cell(self):
        family = downward_closure([AB], 2)
        with pytest.raises(InconsistentError):
            fit_maxent(family, [1, Fraction(1, 5), Fraction(1, 5), Fraction(1, 2)], AB)

    def test_bad_arguments(self, intro):
        family, theta = intro
        with pytest.raises(MalformedInputError):
            fit_maxent(family, theta, AB, method="newton")
        with pytest.raises(MalformedInputError):
            fit_maxent(family, theta, AB, tol=0)
        with pytest.raises(MalformedInputError):
            fit_maxent(family, theta, Itemset.of(3))

    def test_entropy_dominates_other_solutions(self):
        rng = random.Random(8)
        for _ in range(10):
            formula = random_cnf(rng.randint(1, 4), rng.randint(1, 4), rng)
            inst = reduce_max_query(formula)
            res = fit_maxent(inst.family, inst.theta, inst.query)
            others = [construction_distribution(formula)]
            if count_satisfying(formula):
                iv = query_bounds(inst.family, inst.theta, inst.query)
                others += [iv.lo_witness, iv.hi_witness]
            for p in others:
                assert res.entropy >= entropy(p) - 1e-6

    def test_sat_count_identity(self):
        rng = random.Random(4)
        for _ in range(15):
            formula = random_cnf(rng.randint(1, 5), rng.randint(1, 6), rng)
            inst = reduce_max_query(formula)
            res = fit_maxent(inst.family, inst.theta, inst.query)
            L = formula.variable_count
            assert res.query_frequency == pytest.approx(count_satisfying(formula) / 2 ** L,
                                                        abs=1e-6)


class TestDecide:
    def test_intro(self, intro):
        family, theta = intro
        assert decide_entr_query(family, theta, AB, Fraction(1, 4)) is Decision.YES
        assert decide_entr_query(family, theta, AB, Fraction(2, 5)) is Decision.NO
        assert decide_entr_query(family, theta, AB, Fraction(3, 10)) is Decision.INDETERMINATE

    def test_unsat_all_sign_patterns(self):
        clauses = [[s1 * 1, s2 * 2, s3 * 3] for s1 in (1, -1) for s2 in (1, -1)
                   for s3 in (1, -1)]
        inst = reduce_max_query(CnfFormula(3, clauses))
        assert decide_entr_query(inst.family, inst.theta, inst.query, 0) is Decision.INDETERMINATE
        res = fit_maxent(inst.family, inst.theta, inst.query)
        assert res.query_frequency == pytest.approx(0.0, abs=1e-9)
        assert decide_entr_query(inst.family, inst.theta, inst.query,
                                 Fraction(1, 100)) is Decision.NO
