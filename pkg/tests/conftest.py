from fractions import Fraction

import pytest

from freqquery.model import Itemset, downward_closure
from freqquery.reduction import CnfFormula

# Lines reported by the acceptance suite, printed after the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_frequency(mass, mask):
    """Frequency of an itemset mask under a {state: mass} dict, by enumeration."""
    return sum((v for s, v in mass.items() if s & mask == mask), Fraction(0))


def brute_sat_count(formula):
    """Satisfying assignments counted with plain Python loops."""
    count = 0
    for t in range(1 << formula.variable_count):
        if all(any(((t >> (abs(l) - 1)) & 1) == (l > 0) for l in cl) for cl in formula.clauses):
            count += 1
    return count


@pytest.fixture
def intro():
    """Two attributes a, b with frequencies 3/5 and 1/2."""
    family = downward_closure([Itemset.of(0), Itemset.of(1)], 2)
    return family, [Fraction(1), Fraction(3, 5), Fraction(1, 2)]


@pytest.fixture
def two_clause_formula():
    # (v1 or v2) and (not v2 or v3)
    return CnfFormula(3, [[1, 2], [-2, 3]])


# Reduction of (v1 or v2) and (not v2 or v3); attributes v1 v2 v3 c1 c2 = 0..4.
TWO_CLAUSE_GOLDEN = {
    (): Fraction(1),
    (0,): Fraction(1, 2), (1,): Fraction(1, 2), (2,): Fraction(1, 2),
    (0, 1): Fraction(1, 4), (1, 2): Fraction(1, 4),
    (3,): Fraction(3, 4), (0, 3): Fraction(1, 2), (1, 3): Fraction(1, 2),
    (0, 1, 3): Fraction(1, 4),
    (4,): Fraction(3, 4), (1, 4): Fraction(1, 4), (2, 4): Fraction(1, 2),
    (1, 2, 4): Fraction(1, 4),
}
