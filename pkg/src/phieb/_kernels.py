"""Compiled inner loops for the factor table and the linear value heads.

Each kernel works on the leading ``n`` columns of a capacity-padded array and
takes column indices as an int64 array.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def log_density(p, n, cols, flag):
    # log p for the flagged (active) factors, log(1 - p) for the rest
    for c in cols:
        flag[c] = 1
    s = 0.0
    for i in range(n):
        if flag[i]:
            s += math.log(p[i])
        else:
            s += math.log1p(-p[i])
    for c in cols:
        flag[c] = 0
    return s


@njit(cache=True)
def kt_update(p, n, cols, t):
    scale = (t + 1.0) / (t + 2.0)
    inc = 1.0 / (t + 2.0)
    for i in range(n):
        p[i] *= scale
    for c in cols:
        p[c] += inc


@njit(cache=True)
def row_sum(w, a, cols):
    s = 0.0
    for c in cols:
        s += w[a, c]
    return s


@njit(cache=True)
def all_row_sums(w, cols):
    out = np.zeros(w.shape[0])
    for a in range(w.shape[0]):
        s = 0.0
        for c in cols:
            s += w[a, c]
        out[a] = s
    return out


@njit(cache=True)
def set_traces(e, a, cols):
    for c in cols:
        e[a, c] = 1.0


@njit(cache=True)
def apply_traces(w, e, n, coef):
    for a in range(e.shape[0]):
        for j in range(n):
            x = e[a, j]
            if x != 0.0:
                w[a, j] += coef * x


@njit(cache=True)
def decay_traces(e, n, factor, threshold):
    for a in range(e.shape[0]):
        for j in range(n):
            x = e[a, j]
            if x != 0.0:
                x *= factor
                e[a, j] = x if x >= threshold else 0.0
