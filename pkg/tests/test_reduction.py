import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freqquery.errors import MalformedInputError
from freqquery.lp import check_consistent
from freqquery.model import Itemset, satisfies
from freqquery.oracle import count_satisfying
from freqquery.reduction import (CONSISTENT, MAX_QUERY, CnfFormula, attribute_names,
                                 construction_distribution, random_cnf, reduce_consistent,
                                 reduce_max_query)

from conftest import TWO_CLAUSE_GOLDEN, brute_frequency


class TestFormula:
    @pytest.mark.parametrize("clauses", [[[]], [[1, 2, 3, -1]], [[1, 1]], [[4]], [[0]]])
    def test_rejected(self, clauses):
        with pytest.raises(MalformedInputError):
            CnfFormula(3, clauses)

    def test_clause_value(self):
        f = CnfFormula(2, [[1, -2]])
        assert [f.clause_value(0, t) for t in range(4)] == [True, True, False, True]


def test_two_clause_golden(two_clause_formula):
    inst = reduce_max_query(two_clause_formula)
    assert inst.mode == MAX_QUERY
    assert inst.attribute_names == ("v1", "v2", "v3", "c1", "c2")
    assert inst.query == Itemset.of(3, 4)
    got = {m.indices: v for m, v in zip(inst.family, inst.theta)}
    assert got == TWO_CLAUSE_GOLDEN
    assert len(inst.family) == 14
    # members come out in canonical order
    keys = [m.sort_key() for m in inst.family]
    assert keys == sorted(keys)


def test_full_clause_one_eighth():
    inst = reduce_max_query(CnfFormula(3, [[1, 2, 3]]))
    assert inst.theta[inst.family.index(Itemset.of(0, 1, 2, 3))] == Fraction(1, 8)


def test_variables_are_one_half():
    inst = reduce_max_query(random_cnf(4, 3, random.Random(0)))
    for j in range(4):
        assert inst.theta[inst.family.index(Itemset.of(j))] == Fraction(1, 2)


def test_consistent_mode_single_clause():
    inst = reduce_consistent(CnfFormula(1, [[1]]))
    assert inst.mode == CONSISTENT
    assert inst.attribute_names == ("v1", "c1", "c0")
    assert inst.theta[inst.family.index(Itemset.of(2))] == Fraction(1, 2)
    assert inst.theta[inst.family.index(Itemset.of(1, 2))] == Fraction(1, 2)
    assert check_consistent(inst.family, inst.theta).consistent


def test_consistent_mode_unsat():
    inst = reduce_consistent(CnfFormula(2, [[1, 2], [1, -2], [-1, 2], [-1, -2]]))
    assert not check_consistent(inst.family, inst.theta).consistent


def test_needs_clauses():
    with pytest.raises(MalformedInputError):
        reduce_max_query(CnfFormula(2, []))


def test_attribute_names():
    f = CnfFormula(2, [[1]])
    assert attribute_names(f) == ("v1", "v2", "c1")
    assert attribute_names(f, with_c0=True) == ("v1", "v2", "c1", "c0")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 3), st.randoms(use_true_random=False))
def test_structure(L, M, width, rng):
    formula = random_cnf(L, M, rng, width=width)
    inst = reduce_max_query(formula)
    assert inst.family.is_antimonotonic()
    assert len(inst.family) <= 16 * M + 1
    p = construction_distribution(formula)
    assert p.support_size == 1 << L
    assert satisfies(p, inst.family, inst.theta)
    mass = dict(p.items())
    for member, value in zip(inst.family, inst.theta):
        assert (value.denominator & (value.denominator - 1)) == 0
        assert brute_frequency(mass, member.mask) == value
    assert p.frequency(inst.query) == Fraction(count_satisfying(formula), 1 << L)
