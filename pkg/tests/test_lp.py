import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freqquery.errors import (InconsistentError, MalformedInputError, ModeError,
                              PreconditionError, ResourceLimitError)
from freqquery.lp import (BELOW_THRESHOLD, NOT_A_DISTRIBUTION, VIOLATES_THETA, LpProgram,
                          check_consistent, decide_max_query, max_frequency, query_bounds,
                          verify_witness)
from freqquery.model import FrequencyAssignment, Itemset, ItemsetFamily, JointDistribution, \
    downward_closure, satisfies
from freqquery.oracle import count_satisfying, random_consistent_instance, \
    random_singleton_instance
from freqquery.projection import marginal_table
from freqquery.reduction import CnfFormula, reduce_consistent, reduce_max_query

AB = Itemset.of(0, 1)


class TestConsistency:
    def test_product_exists(self, intro):
        family, theta = intro
        res = check_consistent(family, theta)
        assert res.consistent
        assert satisfies(res.witness, family, theta)
        assert res.witness.support_size <= len(family) + 1

    def test_out_of_range_rejected_before_solving(self):
        family = downward_closure([Itemset.of(0)], 1)
        with pytest.raises(MalformedInputError):
            check_consistent(family, [1, Fraction(3, 2)])

    def test_two_clause_consistency_instance(self, two_clause_formula):
        # 4 of 8 assignments satisfy, so c0 can sit on one of them.
        inst = reduce_consistent(two_clause_formula)
        assert check_consistent(inst.family, inst.theta).consistent

    def test_pairwise_consistent_but_jointly_not(self):
        # Each pair table is fine, but three mutually exclusive events of
        # mass 1/2 each cannot coexist.
        family = downward_closure([Itemset.of(0, 1), Itemset.of(0, 2), Itemset.of(1, 2)], 3)
        half = Fraction(1, 2)
        theta = [1 if not m else (half if len(m) == 1 else 0) for m in family]
        for member in family.maximal():
            assert all(v >= 0 for v in marginal_table(family, theta, member))
        assert not check_consistent(family, theta).consistent

    def test_not_antimonotonic(self):
        family = ItemsetFamily([Itemset(), Itemset.of(0, 1)], 2)
        with pytest.raises(PreconditionError):
            check_consistent(family, [1, Fraction(1, 2)])

    def test_k_limit(self):
        family = ItemsetFamily([Itemset(), Itemset.of(16)], 17)
        with pytest.raises(ResourceLimitError):
            check_consistent(family, [1, Fraction(1, 2)])
        with pytest.warns(RuntimeWarning):
            assert check_consistent(family, [1, Fraction(1, 2)], k_limit=17).consistent
        with pytest.raises(ResourceLimitError):
            check_consistent(family, [1, Fraction(1, 2)], k_limit=25)

    def test_empty_row_dropped(self, intro):
        family, theta = intro
        assert LpProgram(family, theta).m == 3


class TestBounds:
    def test_intro_interval(self, intro):
        family, theta = intro
        iv = query_bounds(family, theta, AB)
        assert (iv.lo, iv.hi) == (Fraction(1, 10), Fraction(1, 2))
        assert iv.lo_witness.frequency(AB) == iv.lo
        assert iv.hi_witness.frequency(AB) == iv.hi
        assert satisfies(iv.lo_witness, family, theta)
        assert satisfies(iv.hi_witness, family, theta)

    def test_two_clause_max(self, two_clause_formula):
        inst = reduce_max_query(two_clause_formula)
        assert query_bounds(inst.family, inst.theta, inst.query).hi == Fraction(1, 2)

    def test_singletons_min_rule(self):
        rng = random.Random(5)
        for _ in range(10):
            family, theta = random_singleton_instance(rng.randint(1, 6), rng)
            k = family.attribute_count
            assert max_frequency(family, theta, Itemset(range(k)))[0] == min(theta[1:])

    def test_member_query_is_pinned(self, intro):
        family, theta = intro
        iv = query_bounds(family, theta, Itemset.of(0))
        assert iv.lo == iv.hi == Fraction(3, 5)

    def test_empty_query(self, intro):
        family, theta = intro
        iv = query_bounds(family, theta, Itemset())
        assert iv.lo == iv.hi == 1

    def test_inconsistent_raises(self):
        family = downward_closure([Itemset.of(0, 1)], 2)
        with pytest.raises(InconsistentError):
            query_bounds(family, [1, Fraction(1, 5), Fraction(1, 5), Fraction(1, 2)], AB)

    def test_query_out_of_range(self, intro):
        family, theta = intro
        with pytest.raises(MalformedInputError):
            query_bounds(family, theta, Itemset.of(0, 2))

    def test_witnesses_are_deterministic(self, two_clause_formula):
        inst = reduce_max_query(two_clause_formula)
        a = query_bounds(inst.family, inst.theta, inst.query)
        b = query_bounds(inst.family, inst.theta, inst.query)
        assert a.hi_witness == b.hi_witness and a.lo_witness == b.lo_witness

    @pytest.mark.parametrize("alpha,beta", [
        (Fraction(a, 6), Fraction(b, 6)) for a in range(7) for b in range(7)])
    def test_frechet_grid(self, alpha, beta):
        family = downward_closure([Itemset.of(0), Itemset.of(1)], 2)
        iv = query_bounds(family, [1, alpha, beta], AB)
        assert iv.hi == min(alpha, beta)
        assert iv.lo == max(Fraction(0), alpha + beta - 1)


class TestDecision:
    def test_two_clause_positive(self, two_clause_formula):
        inst = reduce_max_query(two_clause_formula)
        assert decide_max_query(inst.family, inst.theta, inst.query, 0)

    def test_two_clause_strict(self, two_clause_formula):
        inst = reduce_max_query(two_clause_formula)
        assert not decide_max_query(inst.family, inst.theta, inst.query, Fraction(1, 2))

    def test_threshold_one(self, intro):
        family, theta = intro
        assert not decide_max_query(family, theta, Itemset(), 1)

    def test_unsat_formula(self):
        formula = CnfFormula(2, [[1, 2], [1, -2], [-1, 2], [-1, -2]])
        inst = reduce_max_query(formula)
        assert not decide_max_query(inst.family, inst.theta, inst.query, 0)


class TestVerifyWitness:
    def test_hi_witness_passes(self, intro):
        family, theta = intro
        iv = query_bounds(family, theta, AB)
        assert verify_witness(iv.hi_witness, family, theta, AB, Fraction(1, 4))

    def test_uniform_violates(self, intro):
        family, theta = intro
        res = verify_witness(JointDistribution.uniform(2), family, theta, AB, 0)
        assert not res and res.reason == VIOLATES_THETA

    def test_point_mass_violates(self, intro):
        family, theta = intro
        res = verify_witness(JointDistribution.point_mass(3, 2), family, theta, AB, 0)
        assert res.reason == VIOLATES_THETA

    def test_below_threshold(self, intro):
        family, theta = intro
        iv = query_bounds(family, theta, AB)
        res = verify_witness(iv.hi_witness, family, theta, AB, Fraction(1, 2))
        assert res.reason == BELOW_THRESHOLD

    def test_not_a_distribution(self, intro):
        family, theta = intro
        assert verify_witness("nope", family, theta, AB, 0).reason == NOT_A_DISTRIBUTION
        p = JointDistribution.uniform(3)
        assert verify_witness(p, family, theta, AB, 0).reason == NOT_A_DISTRIBUTION

    def test_float_rejected(self, intro):
        family, theta = intro
        with pytest.raises(ModeError):
            verify_witness(JointDistribution.uniform(2, exact=False), family, theta, AB, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_interval_properties(k, rng):
    family, theta, query = random_consistent_instance(k, rng)
    iv = query_bounds(family, theta, query)
    assert 0 <= iv.lo <= iv.hi <= 1
    for w in (iv.lo_witness, iv.hi_witness):
        assert satisfies(w, family, theta)
        assert w.support_size <= len(family) + 1
    if query in family:
        assert iv.lo == iv.hi == theta[family.index(query)]
    # Every family member's marginal is pinned, so both witnesses agree on it.
    for member in family:
        for t in range(1 << len(member)):
            bits = tuple(t >> j & 1 for j in range(len(member)))
            assert (iv.lo_witness.event_probability(member, bits)
                    == iv.hi_witness.event_probability(member, bits))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.randoms(use_true_random=False), st.data())
def test_bounds_monotone_in_query(k, rng, data):
    family, theta, query = random_consistent_instance(k, rng)
    extra = Itemset(data.draw(st.sets(st.integers(0, k - 1), max_size=2)))
    bigger = query | extra
    small, big = query_bounds(family, theta, query), query_bounds(family, theta, bigger)
    assert big.hi <= small.hi
    assert big.lo <= small.lo


def test_thm2_and_thm4_small_sweep():
    rng = random.Random(11)
    from freqquery.reduction import random_cnf
    for _ in range(25):
        formula = random_cnf(rng.randint(1, 4), rng.randint(1, 5), rng, width=rng.randint(1, 3))
        sat = count_satisfying(formula) > 0
        inst = reduce_max_query(formula)
        assert decide_max_query(inst.family, inst.theta, inst.query, 0) == sat
        cons = reduce_consistent(formula)
        assert check_consistent(cons.family, cons.theta).consistent == sat
