"""Compiled inner loops for vertex moves on cluster vectors.

All kernels mutate ``labels``, ``Rp``, ``Rn`` and ``sizes`` in place and
return the resulting change of ``sum_t |Rp_t|^2 - |Rn_t|^2`` divided by
``two_m``, i.e. the change of the spectral objective.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def affinities(rp, rn, Rp, Rn, i, out):
    """``out[t] = Rp[t] . rp[i] - Rn[t] . rn[i]``."""
    k, p = Rp.shape
    for t in range(k):
        acc = 0.0
        for j in range(p):
            acc += Rp[t, j] * rp[i, j] - Rn[t, j] * rn[i, j]
        out[t] = acc


@njit(cache=True)
def self_affinity(rp, rn, i):
    acc = 0.0
    for j in range(rp.shape[1]):
        acc += rp[i, j] * rp[i, j] - rn[i, j] * rn[i, j]
    return acc


@njit(cache=True)
def _shift(rp, rn, Rp, Rn, sizes, i, frm, to):
    for j in range(rp.shape[1]):
        Rp[frm, j] -= rp[i, j]
        Rn[frm, j] -= rn[i, j]
        Rp[to, j] += rp[i, j]
        Rn[to, j] += rn[i, j]
    sizes[frm] -= 1
    sizes[to] += 1


@njit(cache=True)
def greedy_assign(rp, rn, order, labels, Rp, Rn, sizes):
    """Add each vertex of ``order`` (currently unassigned) to the cluster of
    largest affinity, lowest label on ties."""
    k = Rp.shape[0]
    aff = np.empty(k)
    for idx in range(order.shape[0]):
        i = order[idx]
        affinities(rp, rn, Rp, Rn, i, aff)
        best = 0
        for t in range(1, k):
            if aff[t] > aff[best]:
                best = t
        labels[i] = best
        for j in range(rp.shape[1]):
            Rp[best, j] += rp[i, j]
            Rn[best, j] += rn[i, j]
        sizes[best] += 1


@njit(cache=True)
def move_vertices(rp, rn, labels, Rp, Rn, sizes, verts, targets, two_m):
    """Move ``verts[q]`` to ``targets[q]`` in sequence; return the objective change."""
    k = Rp.shape[0]
    aff = np.empty(k)
    total = 0.0
    for q in range(verts.shape[0]):
        i = verts[q]
        frm = labels[i]
        to = targets[q]
        if frm == to:
            continue
        affinities(rp, rn, Rp, Rn, i, aff)
        own = aff[frm] - self_affinity(rp, rn, i)
        total += 2.0 * (aff[to] - own) / two_m
        _shift(rp, rn, Rp, Rn, sizes, i, frm, to)
        labels[i] = to
    return total


@njit(cache=True)
def local_search(rp, rn, labels, Rp, Rn, sizes, two_m, iters, tol):
    """Up to ``iters`` ascending-order sweeps of best single-vertex moves.

    A vertex moves only when its best gain exceeds ``tol``; sweeps stop
    early once one of them moves nothing.
    """
    n = labels.shape[0]
    k = Rp.shape[0]
    aff = np.empty(k)
    total = 0.0
    for _ in range(iters):
        moved = False
        for i in range(n):
            cur = labels[i]
            affinities(rp, rn, Rp, Rn, i, aff)
            own = aff[cur] - self_affinity(rp, rn, i)
            best = -1
            best_gain = tol
            for t in range(k):
                if t == cur:
                    continue
                g = 2.0 * (aff[t] - own) / two_m
                if g > best_gain:
                    best_gain = g
                    best = t
            if best >= 0:
                total += best_gain
                _shift(rp, rn, Rp, Rn, sizes, i, cur, best)
                labels[i] = best
                moved = True
        if not moved:
            break
    return total
