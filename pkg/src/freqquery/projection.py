"""Marginal tables of family members, recovered from frequencies alone.

For an antimonotonic family every member ``C`` has a fully determined
marginal: ``p(C = t)`` is a signed sum of the frequencies of the subsets of
``C`` (inclusion-exclusion over the attributes where ``t`` is zero). Any two
distributions satisfying the frequencies therefore agree on it.

For inconsistent frequencies the sums may leave ``[0, 1]``; the raw value is
returned so callers can use it as a diagnostic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .errors import PreconditionError, UnknownItemsetError
from .model import Itemset, ItemsetFamily, as_bits, as_itemset, check_aligned


def _lookup(family: ItemsetFamily, itemset: Itemset) -> int:
    if itemset not in family:
        raise UnknownItemsetError(
            f"{itemset!r} is not a member of the family; its probability is not "
            f"determined by the frequencies (use query bounds instead)")
    return family.index(itemset)


def _require_antimonotonic(family: ItemsetFamily) -> None:
    if not family.is_antimonotonic():
        missing = family.missing_subsets()
        raise PreconditionError(
            f"family is not antimonotonic; missing subsets include {missing[:5]!r}")


def _signed_sum(family, theta, ones: int, zeros: int) -> Fraction:
    # sum over H subset of zeros of (-1)^|H| * theta[ones | H]
    total = Fraction(0)
    sub = zeros
    while True:
        value = theta[family.index(Itemset.from_mask(ones | sub))]
        total += -value if bin(sub).count("1") & 1 else value
        if sub == 0:
            break
        sub = (sub - 1) & zeros
    return total


def project(family: ItemsetFamily, theta, member, t) -> Fraction:
    """Exact probability ``p(member = t)`` shared by all satisfying distributions."""
    theta = check_aligned(family, theta)
    member = as_itemset(member)
    _lookup(family, member)
    _require_antimonotonic(family)
    bits = as_bits(t, len(member))
    ones = zeros = 0
    for idx, b in zip(member.indices, bits):
        if b:
            ones |= 1 << idx
        else:
            zeros |= 1 << idx
    return _signed_sum(family, theta, ones, zeros)


class Projection(NamedTuple):
    value: Fraction
    in_range: bool


def project_status(family: ItemsetFamily, theta, member, t) -> Projection:
    """Like :func:`project`, flagging values outside ``[0, 1]``."""
    value = project(family, theta, member, t)
    return Projection(value, 0 <= value <= 1)


def marginal_table(family: ItemsetFamily, theta, member) -> list:
    """All ``2^|member|`` projected probabilities.

    Entry ``k`` holds ``p(member = t)`` where ``t_j`` is bit ``j`` of ``k``
    and ``j`` runs over the member's attributes in ascending order.
    """
    theta = check_aligned(family, theta)
    member = as_itemset(member)
    _lookup(family, member)
    _require_antimonotonic(family)
    idx = member.indices
    table = []
    for k in range(1 << len(idx)):
        ones = zeros = 0
        for j, a in enumerate(idx):
            if k >> j & 1:
                ones |= 1 << a
            else:
                zeros |= 1 << a
        table.append(_signed_sum(family, theta, ones, zeros))
    return table


def negative_cells(family: ItemsetFamily, theta) -> list:
    """``(member, pattern, value)`` for every projected probability below zero.

    A non-empty result proves the frequencies inconsistent. The converse does
    not hold: every marginal can be valid while no joint distribution exists.
    """
    theta = check_aligned(family, theta)
    _require_antimonotonic(family)
    out = []
    for member in family.maximal():
        table = marginal_table(family, theta, member)
        for k, value in enumerate(table):
            if value < 0:
                pattern = tuple(k >> j & 1 for j in range(len(member)))
                out.append((member, pattern, value))
    return out
