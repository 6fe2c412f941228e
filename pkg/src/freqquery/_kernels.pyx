# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops over the sample space {0,1}^K.

Every function here has a numpy twin with the same signature in
``_pykernels.py``; ``kernels.py`` picks one at import time.
"""

from libc.math cimport fabs

import numpy as np


def scan_states(const long long[:] masks, const long long[:] coefs,
                long long base, long long qmask, long long qcoef,
                long long n_states, bint nonzero,
                const long long[:] fcare, const long long[:] fvals):
    """First state w with value(w) < 0 (or != 0 when ``nonzero``), else -1.

    value(w) = qcoef*[qmask <= w] - base - sum_i coefs[i]*[masks[i] <= w]

    States with ``w & fcare[k] == fvals[k]`` for some k are skipped. The
    caller guarantees that no partial sum overflows int64.
    """
    cdef Py_ssize_t i, n = masks.shape[0], k, nf = fcare.shape[0]
    cdef long long w, v, m
    cdef bint skip
    for w in range(n_states):
        skip = False
        for k in range(nf):
            if (w & fcare[k]) == fvals[k]:
                skip = True
                break
        if skip:
            continue
        v = -base
        if (w & qmask) == qmask:
            v += qcoef
        for i in range(n):
            m = masks[i]
            if (w & m) == m:
                v -= coefs[i]
        if nonzero:
            if v != 0:
                return w
        elif v < 0:
            return w
    return -1


def superset_sums(double[:] q, int k):
    """In place: q[w] becomes the sum of q over all supersets of w."""
    cdef long long n = q.shape[0]
    cdef long long bit, w
    cdef int b
    for b in range(k):
        bit = 1LL << b
        for w in range(n):
            if not (w & bit):
                q[w] += q[w | bit]


def marginal_scale(double[:] q, const long long[:] attrs, const double[:] target):
    """One IPF step on the marginal table of the attributes ``attrs``.

    Returns the largest absolute deviation of the table before scaling.
    """
    cdef long long n = q.shape[0]
    cdef Py_ssize_t j, r = attrs.shape[0]
    cdef long long w, cell, cells = 1LL << r
    cdef double worst = 0.0, d
    cdef double[::1] cur = np.zeros(cells)
    cdef double[::1] factor = np.zeros(cells)
    for w in range(n):
        if q[w] == 0.0:
            continue
        cell = 0
        for j in range(r):
            cell |= ((w >> attrs[j]) & 1) << j
        cur[cell] += q[w]
    for cell in range(cells):
        d = fabs(cur[cell] - target[cell])
        if d > worst:
            worst = d
        if cur[cell] > 0.0:
            factor[cell] = target[cell] / cur[cell]
    for w in range(n):
        if q[w] == 0.0:
            continue
        cell = 0
        for j in range(r):
            cell |= ((w >> attrs[j]) & 1) << j
        q[w] *= factor[cell]
    return worst


def itemset_scale(double[:] q, long long mask, double target, double eps):
    """One binary IPF step on the event ``mask <= w``; returns the prior mass."""
    cdef long long n = q.shape[0]
    cdef long long w
    cdef double m = 0.0, inside, outside
    for w in range(n):
        if (w & mask) == mask:
            m += q[w]
    if fabs(m - target) <= eps:
        return m
    inside = target / m if m > 0.0 else 0.0
    outside = (1.0 - target) / (1.0 - m) if m < 1.0 else 0.0
    for w in range(n):
        if (w & mask) == mask:
            q[w] *= inside
        else:
            q[w] *= outside
    return m

