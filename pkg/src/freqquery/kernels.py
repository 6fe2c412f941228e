"""Backend selection for the sample-space loops.

The compiled extension ``freqquery._kernels`` is used when it imports;
otherwise the numpy versions in ``freqquery._pykernels`` are used. Setting
``FREQQUERY_PURE_PYTHON=1`` forces the fallback.
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("FREQQUERY_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _pykernels


def scan_states(masks, coefs, base, qmask=0, qcoef=0, n_states=0, nonzero=False,
                forbidden=()):
    """First state (ascending) whose integer value is negative, or nonzero.

    ``value(w) = qcoef*[qmask <= w] - base - sum_i coefs[i]*[masks[i] <= w]``.
    Arbitrary Python ints are accepted; when the partial sums could overflow
    int64 the exact object-dtype path is taken. ``forbidden`` holds
    ``(care, value)`` pairs; states with ``w & care == value`` are skipped.
    Returns -1 if no state qualifies.
    """
    fcare = [c for c, _ in forbidden]
    fvals = [v for _, v in forbidden]
    bound = sum(abs(c) for c in coefs) + abs(base) + abs(qcoef)
    if _compiled is None or bound >= _pykernels.INT64_SAFE:
        return _pykernels.scan_states(masks, coefs, base, qmask, qcoef, n_states, nonzero,
                                      fcare, fvals)
    return _compiled.scan_states(
        np.asarray(masks, dtype=np.int64), np.asarray(coefs, dtype=np.int64),
        int(base), int(qmask), int(qcoef), int(n_states), bool(nonzero),
        np.asarray(fcare, dtype=np.int64), np.asarray(fvals, dtype=np.int64))


def superset_sums(q, k):
    """In place: ``q[w]`` becomes the total of ``q`` over supersets of ``w``."""
    _impl.superset_sums(q, k)


def marginal_scale(q, attrs, target):
    return _impl.marginal_scale(q, np.asarray(attrs, dtype=np.int64),
                                np.asarray(target, dtype=np.float64))


def itemset_scale(q, mask, target, eps):
    return _impl.itemset_scale(q, int(mask), float(target), float(eps))
