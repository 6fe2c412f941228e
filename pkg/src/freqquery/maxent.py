"""Maximum entropy estimates by iterative proportional fitting (IPF).

The entropy-maximising distribution satisfying the frequencies is the
I-projection of the uniform distribution onto the satisfying set, which IPF
started from uniform converges to.

Two update schemes are offered:

``"marginal"`` (default)
    Each maximal member ``C`` has a marginal table ``p(C = t)`` fixed by the
    frequencies (see :mod:`freqquery.projection`). A step rescales every cell
    of that table at once. Cells with target 0 are emptied before the first
    sweep, after which convergence is fast even when the solution has many
    structural zeros.

``"itemset"``
    Each member ``F`` is a binary event ``F = 1`` with probability
    ``theta_F``; a step rescales the event by ``theta/m`` and its complement
    by ``(1-theta)/(1-m)``. Zero frequencies are applied once up front.
    Convergence is sublinear when the optimum sits on the boundary of the
    simplex, as it does for instances built from CNF formulas.

Both schemes have the same fixed point. Work is done in double precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import InconsistentError, MalformedInputError, PreconditionError
from .model import DEFAULT_K_LIMIT, ItemsetFamily, JointDistribution, as_itemset, \
    check_aligned, check_k_limit, to_fraction
from .projection import marginal_table

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000
METHODS = ("marginal", "itemset")

# Updates are skipped when the event mass already matches to this precision.
_SKIP_EPS = 4 * np.finfo(np.float64).eps


def entropy(p: JointDistribution) -> float:
    """Shannon entropy in nats, with ``0 log 0 = 0``."""
    if p.exact:
        return -sum(float(v) * math.log(v) for _, v in p.items() if v)
    q = p.to_dense()
    nz = q[q > 0]
    return float(-(nz * np.log(nz)).sum())


@dataclass(frozen=True)
class MaxEntResult:
    distribution: JointDistribution
    query_frequency: Optional[float]
    iterations: int
    residual: float
    converged: bool

    def frequency(self, itemset) -> float:
        return self.distribution.frequency(as_itemset(itemset))

    @property
    def entropy(self) -> float:
        return entropy(self.distribution)


def _sweep_order(members):
    return sorted(members, key=lambda m: m.sort_key())


def _residual(q, k, masks, targets) -> float:
    sums = q.copy()
    kernels.superset_sums(sums, k)
    return float(np.abs(sums[masks] - targets).max()) if len(masks) else 0.0


def fit_maxent(family: ItemsetFamily, theta, query=None, *, tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER, method: str = "marginal",
               k_limit: int = DEFAULT_K_LIMIT) -> MaxEntResult:
    """Fit the maximum entropy distribution and read off ``query``'s frequency.

    Exceeding ``max_iter`` sweeps is not an error: the result comes back with
    ``converged=False``. Frequencies whose marginal tables contain a negative
    cell, or that leave no mass after the zero cells are emptied, raise
    :class:`InconsistentError`.
    """
    if method not in METHODS:
        raise MalformedInputError(f"unknown method {method!r}; choose from {METHODS}")
    if not tol > 0:
        raise MalformedInputError("tol must be positive")
    if max_iter < 1:
        raise MalformedInputError("max_iter must be positive")
    theta = check_aligned(family, theta)
    k = family.attribute_count
    check_k_limit(k, k_limit)
    if not family.is_antimonotonic():
        raise PreconditionError("family is not antimonotonic")
    if query is not None:
        query = as_itemset(query)
        if query.max_index >= k:
            raise MalformedInputError(f"query {query!r} does not fit K = {k}")

    n = 1 << k
    masks = np.array([m.mask for m in family], dtype=np.int64)
    targets = np.array([float(v) for v in theta])
    states = np.arange(n, dtype=np.int64)
    q = np.full(n, 1.0 / n)

    if method == "marginal":
        steps = []
        for member in _sweep_order(family.maximal()):
            table = marginal_table(family, theta, member)
            if any(v < 0 for v in table):
                raise InconsistentError(
                    f"marginal of {member!r} has a negative cell; frequencies are inconsistent")
            attrs = member.indices
            cell = np.zeros(n, dtype=np.int64)
            for j, a in enumerate(attrs):
                cell |= ((states >> a) & 1) << j
            zero_cells = [c for c, v in enumerate(table) if v == 0]
            if zero_cells:
                q[np.isin(cell, zero_cells)] = 0.0
            steps.append((attrs, np.array([float(v) for v in table])))
    else:
        steps = []
        for member, value in sorted(zip(family, theta), key=lambda mv: mv[0].sort_key()):
            if not member:
                continue
            if value == 0:
                q[(states & member.mask) == member.mask] = 0.0
            else:
                steps.append((member.mask, float(value)))

    total = q.sum()
    if total <= 0:
        raise InconsistentError("no mass left after applying zero constraints")
    q /= total

    residual = _residual(q, k, masks, targets)
    iterations = 0
    while residual > tol and iterations < max_iter:
        if method == "marginal":
            for attrs, table in steps:
                kernels.marginal_scale(q, attrs, table)
        else:
            for mask, value in steps:
                kernels.itemset_scale(q, mask, value, _SKIP_EPS)
        total = q.sum()
        if total <= 0:
            raise InconsistentError("IPF lost all mass; frequencies are inconsistent")
        q /= total
        iterations += 1
        residual = _residual(q, k, masks, targets)

    dist = JointDistribution(q, k, exact=False, k_limit=k_limit)
    qf = dist.frequency(query) if query is not None else None
    return MaxEntResult(dist, qf, iterations, residual, residual <= tol)


class Decision(enum.Enum):
    YES = "yes"
    NO = "no"
    INDETERMINATE = "indeterminate"


def decide_entr_query(family: ItemsetFamily, theta, query, threshold, *,
                      tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                      method: str = "marginal", k_limit: int = DEFAULT_K_LIMIT) -> Decision:
    """Compare the MaxEnt frequency of ``query`` with ``threshold``.

    Values within ``tol`` of the threshold, and fits that did not converge,
    are reported as :attr:`Decision.INDETERMINATE`.
    """
    b = float(to_fraction(threshold))
    result = fit_maxent(family, theta, query, tol=tol, max_iter=max_iter, method=method,
                        k_limit=k_limit)
    if not result.converged:
        return Decision.INDETERMINATE
    f = result.query_frequency
    if f > b + tol:
        return Decision.YES
    if f < b - tol:
        return Decision.NO
    return Decision.INDETERMINATE
