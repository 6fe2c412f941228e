"""Numpy implementations of the inner loops in ``_kernels.pyx``.

Used when the compiled extension is unavailable, and for integer scans whose
coefficients do not fit in int64 (``dtype=object`` keeps Python ints exact).
"""

import numpy as np

_CHUNK = 1 << 13

#: Partial sums below this bound cannot overflow int64.
INT64_SAFE = 1 << 62


def scan_states(masks, coefs, base, qmask, qcoef, n_states, nonzero, fcare=(), fvals=()):
    """First state w with value(w) < 0 (or != 0 when ``nonzero``), else -1.

    value(w) = qcoef*[qmask <= w] - base - sum_i coefs[i]*[masks[i] <= w]

    States with ``w & fcare[k] == fvals[k]`` for some k are skipped.
    """
    masks = [int(m) for m in masks]
    coefs = [int(c) for c in coefs]
    bound = sum(abs(c) for c in coefs) + abs(base) + abs(qcoef)
    dtype = np.int64 if bound < INT64_SAFE else object
    for start in range(0, n_states, _CHUNK):
        w = np.arange(start, min(start + _CHUNK, n_states), dtype=np.int64)
        v = np.full(w.shape, -base, dtype=dtype)
        if qcoef:
            v[(w & qmask) == qmask] += qcoef
        for m, c in zip(masks, coefs):
            if c:
                v[(w & m) == m] -= c
        live = v != 0 if nonzero else v < 0
        for care, val in zip(fcare, fvals):
            live &= (w & int(care)) != int(val)
        hit = np.flatnonzero(live)
        if hit.size:
            return int(w[hit[0]])
    return -1


def superset_sums(q, k):
    """In place: q[w] becomes the sum of q over all supersets of w."""
    for b in range(k):
        view = q.reshape(-1, 2, 1 << b)
        view[:, 0, :] += view[:, 1, :]


def _cells(n, attrs):
    w = np.arange(n, dtype=np.int64)
    cell = np.zeros(n, dtype=np.int64)
    for j, a in enumerate(attrs):
        cell |= ((w >> int(a)) & 1) << j
    return cell


def marginal_scale(q, attrs, target):
    """One IPF step on the marginal table of the attributes ``attrs``.

    Returns the largest absolute deviation of the table before scaling.
    """
    target = np.asarray(target, dtype=np.float64)
    cell = _cells(q.shape[0], attrs)
    cur = np.bincount(cell, weights=q, minlength=target.shape[0])
    worst = float(np.abs(cur - target).max())
    factor = np.divide(target, cur, out=np.zeros_like(target), where=cur > 0)
    q *= factor[cell]
    return worst


def itemset_scale(q, mask, target, eps):
    """One binary IPF step on the event ``mask <= w``; returns the prior mass."""
    w = np.arange(q.shape[0], dtype=np.int64)
    inside = (w & mask) == mask
    m = float(q[inside].sum())
    if abs(m - target) <= eps:
        return m
    q[inside] *= target / m if m > 0.0 else 0.0
    q[~inside] *= (1.0 - target) / (1.0 - m) if m < 1.0 else 0.0
    return m
