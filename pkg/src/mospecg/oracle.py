"""Brute-force references for small graphs.

These are deliberately naive and share no code paths with the optimized
implementations they are used to check.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph
from .partition import Partition
from .spectral import ClusterVectors, GammaPair, SpectralContext

__all__ = ["MAX_ENUMERATION_N", "enumerate_optimal", "recompute_cluster_vectors",
           "set_partitions"]

MAX_ENUMERATION_N = 12


def set_partitions(n: int):
    """Yield every set partition of ``n`` items once, as a restricted growth
    string (``a[0] = 0``, ``a[i] <= 1 + max(a[:i])``)."""
    if n == 0:
        yield []
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])
    while True:
        yield list(a)
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        nxt = max(b[i], a[i] + 1)
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = nxt


def enumerate_optimal(g: Graph, gamma: GammaPair) -> tuple[float, Partition]:
    """Best weighted aggregate modularity over all partitions of ``g``.

    Ties keep the first partition met in restricted-growth order.
    """
    n = g.n
    if n > MAX_ENUMERATION_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {MAX_ENUMERATION_N}, got {n}")
    w = g.dense()
    s = g.strength
    two_m = g.total_weight_2m
    bw = gamma.gamma1 * w - gamma.gamma2 * np.outer(s, s) / two_m
    best, best_labels = -np.inf, None
    for labels in set_partitions(n):
        lab = np.asarray(labels)
        qw = float(bw[lab[:, None] == lab[None, :]].sum()) / two_m
        if qw > best + 1e-15:
            best, best_labels = qw, labels
    return float(best), Partition(best_labels)


def recompute_cluster_vectors(ctx: SpectralContext, part, k: int | None = None) -> ClusterVectors:
    """Cluster vectors summed member by member."""
    labels = part.labels if isinstance(part, Partition) else np.asarray(part)
    k = int(labels.max()) + 1 if k is None else k
    Rp = np.zeros((k, ctx.p))
    Rn = np.zeros((k, ctx.p))
    sizes = np.zeros(k, dtype=np.int64)
    for i, t in enumerate(labels.tolist()):
        for j in range(ctx.p):
            Rp[t, j] += ctx.rp[i, j]
            Rn[t, j] += ctx.rn[i, j]
        sizes[t] += 1
    return ClusterVectors(Rp, Rn, sizes)
