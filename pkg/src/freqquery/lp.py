"""Exact linear programming over distributions on ``{0,1}^K``.

The program has one variable ``x_w`` per sample point ``w`` and one equality
row per non-empty family member ``F``: ``sum_{w >= F} x_w = theta_F``, plus
the normalisation row ``sum_w x_w = 1``. The ``2^K`` columns are never
stored; a column is described by which member masks it contains, and pricing
scans the sample space through :func:`freqquery.kernels.scan_states`.

The solver is a two-phase revised simplex with an explicit rational basis
inverse and Bland's rule, so every result (consistency, interval endpoints,
witness masses) is exact. A basic solution has at most one nonzero per row,
hence every witness has at most ``N + 1`` support points.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from . import kernels
from .errors import InconsistentError, MalformedInputError, ModeError, PreconditionError, \
    ResourceLimitError
from .projection import marginal_table
from .model import ItemsetFamily, JointDistribution, as_itemset, check_aligned, check_k_limit, \
    to_fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Q = Fraction

#: Default largest K accepted by the LP engine.
LP_K_LIMIT = 16
#: Hard ceiling for ``k_limit`` overrides.
LP_K_MAX = 24

_ZERO = _Q(0)
_ONE = _Q(1)


def _resolve_k_limit(k_limit: Optional[int]) -> int:
    if k_limit is None:
        return LP_K_LIMIT
    if k_limit > LP_K_MAX:
        raise ResourceLimitError(f"k_limit may not exceed {LP_K_MAX}, got {k_limit}")
    if k_limit > LP_K_LIMIT:
        warnings.warn(f"LP k_limit raised to {k_limit}; each pricing pass scans 2^K points",
                      RuntimeWarning, stacklevel=3)
    return k_limit


def _fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _zero_cells(family: ItemsetFamily, theta) -> tuple:
    """Sample-space patterns every satisfying distribution must leave empty.

    A cell of a member's marginal table with projected mass 0 pins ``x_w = 0``
    for all ``w`` in it; a negative projected mass refutes consistency
    outright. Returns ``(forbidden, refuted)`` where ``forbidden`` lists
    ``(care_mask, value_mask)`` pairs.
    """
    forbidden = []
    refuted = False
    for member in family.maximal():
        idx = member.indices
        for k, value in enumerate(marginal_table(family, theta, member)):
            if value < 0:
                refuted = True
            if value <= 0:
                ones = 0
                for j, a in enumerate(idx):
                    if k >> j & 1:
                        ones |= 1 << a
                forbidden.append((member.mask, ones))
    return forbidden, refuted


class LpProgram:
    """Rows of the distribution polytope for a family and its frequencies."""

    def __init__(self, family: ItemsetFamily, theta, k_limit: Optional[int] = None):
        k_limit = _resolve_k_limit(k_limit)
        theta = check_aligned(family, theta)
        check_k_limit(family.attribute_count, k_limit)
        if not family.is_antimonotonic():
            raise PreconditionError(
                "family is not antimonotonic; missing subsets: "
                f"{family.missing_subsets()[:5]!r}")
        self.family = family
        self.theta = theta
        self.attribute_count = family.attribute_count
        self.n_states = 1 << family.attribute_count
        # The empty itemset duplicates normalisation (its value was checked to be 1).
        self.masks = [m.mask for m in family if m.mask]
        self.rhs = [_Q(v) for m, v in zip(family, theta) if m.mask] + [_ONE]
        self.m = len(self.rhs)
        self.forbidden, self.refuted = _zero_cells(family, theta)

    def rows_of(self, column: int) -> list:
        """Row indices where ``column`` has a 1."""
        if column >= self.n_states:
            return [column - self.n_states]
        rows = [i for i, mask in enumerate(self.masks) if column & mask == mask]
        rows.append(self.m - 1)
        return rows


class _Simplex:
    """Mutable simplex state: basis, basis inverse and basic values."""

    def __init__(self, program: LpProgram):
        self.program = program
        m = program.m
        self.basis = [program.n_states + r for r in range(m)]
        self.binv = [[_ONE if i == j else _ZERO for j in range(m)] for i in range(m)]
        self.x = list(program.rhs)
        self.pivots = 0

    def copy(self) -> "_Simplex":
        other = _Simplex.__new__(_Simplex)
        other.program = self.program
        other.basis = list(self.basis)
        other.binv = [list(row) for row in self.binv]
        other.x = list(self.x)
        other.pivots = self.pivots
        return other

    def is_artificial(self, column: int) -> bool:
        return column >= self.program.n_states

    def _alpha(self, column: int) -> list:
        rows = self.program.rows_of(column)
        out = []
        for row in self.binv:
            s = _ZERO
            for k in rows:
                v = row[k]
                if v:
                    s += v
            out.append(s)
        return out

    def _pivot(self, column: int, p: int, alpha: list) -> None:
        piv = alpha[p]
        row_p = [v / piv for v in self.binv[p]]
        x_p = self.x[p] / piv
        for r, a in enumerate(alpha):
            if r == p or not a:
                continue
            row = self.binv[r]
            for k, v in enumerate(row_p):
                if v:
                    row[k] -= a * v
            self.x[r] -= a * x_p
        self.binv[p] = row_p
        self.x[p] = x_p
        self.basis[p] = column
        self.pivots += 1

    def _ratio_row(self, alpha: list) -> int:
        best = -1
        best_ratio = None
        for r, a in enumerate(alpha):
            if a > 0:
                ratio = self.x[r] / a
                if (best < 0 or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[r] < self.basis[best])):
                    best, best_ratio = r, ratio
        return best

    def _duals(self, basic_costs: list) -> list:
        m = self.program.m
        y = [_ZERO] * m
        for c, row in zip(basic_costs, self.binv):
            if c:
                for k, v in enumerate(row):
                    if v:
                        y[k] += c * v
        return y

    def _scan(self, weights: list, qmask: int, qcoef: int, nonzero: bool) -> int:
        """Scan structural columns for ``qcoef*[qmask<=w] - weights . A_w``."""
        den = 1
        for v in weights:
            if v:
                den = math.lcm(den, int(v.denominator))
        ints = [int(v * den) for v in weights]
        prog = self.program
        return kernels.scan_states(prog.masks, ints[:-1], ints[-1], qmask, qcoef * den,
                                   prog.n_states, nonzero, prog.forbidden)

    def optimize(self, query_mask: int, sign: int) -> None:
        """Minimise ``sign * [query <= w]`` (phase 2) or, with ``sign == 0``, the
        sum of artificials (phase 1). Artificials never re-enter the basis."""
        while True:
            if sign == 0:
                costs = [_ONE if self.is_artificial(b) else _ZERO for b in self.basis]
            else:
                costs = [_Q(sign) if not self.is_artificial(b) and b & query_mask == query_mask
                         else _ZERO for b in self.basis]
            y = self._duals(costs)
            column = self._scan(y, query_mask, sign, nonzero=False)
            if column < 0:
                return
            alpha = self._alpha(column)
            p = self._ratio_row(alpha)
            if p < 0:  # pragma: no cover - the polytope is bounded
                raise RuntimeError("LP unbounded; the distribution polytope is compact")
            self._pivot(column, p, alpha)

    def infeasibility(self):
        return sum((x for b, x in zip(self.basis, self.x) if self.is_artificial(b)), _ZERO)

    def drive_out_artificials(self) -> None:
        """Replace zero-valued basic artificials by structural columns where possible.

        An artificial that cannot be replaced sits on a redundant row; it stays
        basic at value zero and no later pivot touches that row.
        """
        for r in range(self.program.m):
            if not self.is_artificial(self.basis[r]):
                continue
            column = self._scan(self.binv[r], 0, 0, nonzero=True)
            if column >= 0:
                self._pivot(column, r, self._alpha(column))

    def objective(self, query_mask: int):
        return sum((x for b, x in zip(self.basis, self.x)
                    if not self.is_artificial(b) and b & query_mask == query_mask), _ZERO)

    def witness(self) -> JointDistribution:
        mass = {b: _fraction(x) for b, x in zip(self.basis, self.x)
                if not self.is_artificial(b) and x}
        return JointDistribution(mass, self.program.attribute_count, exact=True)


def _phase_one(program: LpProgram) -> Optional[_Simplex]:
    if program.refuted:
        return None
    s = _Simplex(program)
    s.optimize(0, 0)
    if s.infeasibility() != 0:
        return None
    s.drive_out_artificials()
    return s


class ConsistencyResult(NamedTuple):
    consistent: bool
    witness: Optional[JointDistribution]

    def __bool__(self):
        return self.consistent


@dataclass(frozen=True)
class QueryInterval:
    """Tight range of frequencies of a query over all satisfying distributions."""

    lo: Fraction
    hi: Fraction
    lo_witness: JointDistribution
    hi_witness: JointDistribution

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi


def check_consistent(family: ItemsetFamily, theta, *, k_limit: Optional[int] = None
                     ) -> ConsistencyResult:
    """Decide whether some distribution reproduces ``theta`` exactly.

    When it does, the result carries a vertex witness with at most ``N + 1``
    support points.
    """
    program = LpProgram(family, theta, k_limit)
    s = _phase_one(program)
    if s is None:
        return ConsistencyResult(False, None)
    return ConsistencyResult(True, s.witness())


def _query_mask(family: ItemsetFamily, query) -> int:
    query = as_itemset(query)
    if query.max_index >= family.attribute_count:
        raise MalformedInputError(
            f"query {query!r} references attribute {query.max_index} "
            f"but K = {family.attribute_count}")
    return query.mask


def _feasible(program: LpProgram) -> _Simplex:
    s = _phase_one(program)
    if s is None:
        raise InconsistentError("the frequencies are inconsistent; no distribution satisfies them")
    return s


def query_bounds(family: ItemsetFamily, theta, query, *, k_limit: Optional[int] = None
                 ) -> QueryInterval:
    """Exact minimum and maximum frequency of ``query`` over satisfying distributions."""
    program = LpProgram(family, theta, k_limit)
    qmask = _query_mask(family, query)
    start = _feasible(program)
    hi_run = start.copy()
    hi_run.optimize(qmask, -1)
    lo_run = start
    lo_run.optimize(qmask, 1)
    return QueryInterval(
        lo=_fraction(lo_run.objective(qmask)), hi=_fraction(hi_run.objective(qmask)),
        lo_witness=lo_run.witness(), hi_witness=hi_run.witness())


def max_frequency(family: ItemsetFamily, theta, query, *, k_limit: Optional[int] = None
                  ) -> tuple:
    """Upper end of the interval alone, with its witness: ``(hi, witness)``."""
    program = LpProgram(family, theta, k_limit)
    qmask = _query_mask(family, query)
    s = _feasible(program)
    s.optimize(qmask, -1)
    return _fraction(s.objective(qmask)), s.witness()


def decide_max_query(family: ItemsetFamily, theta, query, threshold, *,
                     k_limit: Optional[int] = None) -> bool:
    """Whether some satisfying distribution gives ``query`` frequency above ``threshold``."""
    b = to_fraction(threshold)
    if b >= 1:
        # Still validate the instance so bad input is not silently accepted.
        LpProgram(family, theta, k_limit)
        _query_mask(family, query)
        return False
    hi, _ = max_frequency(family, theta, query, k_limit=k_limit)
    return hi > b


class WitnessCheck(NamedTuple):
    """Outcome of checking a certificate; ``reason`` is None when it passes."""

    ok: bool
    reason: Optional[str]

    def __bool__(self):
        return self.ok


NOT_A_DISTRIBUTION = "not-a-distribution"
VIOLATES_THETA = "violates-theta"
BELOW_THRESHOLD = "below-threshold"


def verify_witness(p: JointDistribution, family: ItemsetFamily, theta, query,
                   threshold) -> WitnessCheck:
    """Check a certificate that ``query`` can exceed ``threshold``.

    ``p`` must be a proper distribution, reproduce ``theta`` exactly and give
    ``query`` a frequency strictly above ``threshold``.
    """
    if not isinstance(p, JointDistribution):
        return WitnessCheck(False, NOT_A_DISTRIBUTION)
    if not p.exact:
        raise ModeError("certificates must be exact distributions")
    theta = check_aligned(family, theta)
    masses = [v for _, v in p.items()]
    if any(v < 0 for v in masses) or sum(masses, Fraction(0)) != 1:
        return WitnessCheck(False, NOT_A_DISTRIBUTION)
    if p.attribute_count != family.attribute_count:
        return WitnessCheck(False, NOT_A_DISTRIBUTION)
    for member, value in zip(family, theta):
        if p.frequency(member) != value:
            return WitnessCheck(False, VIOLATES_THETA)
    if not p.frequency(as_itemset(query)) > to_fraction(threshold):
        return WitnessCheck(False, BELOW_THRESHOLD)
    return WitnessCheck(True, None)
