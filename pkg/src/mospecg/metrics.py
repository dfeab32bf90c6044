"""Partition quality and agreement measures."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .partition import Partition, compact_labels

__all__ = [
    "cluster_sizes",
    "contingency",
    "modularity",
    "nmi",
    "pair_agreement",
    "q_in",
    "q_null",
]


def _labels(part, n=None) -> np.ndarray:
    labels = part.labels if isinstance(part, Partition) else compact_labels(part)
    if n is not None and labels.shape[0] != n:
        raise ValueError(f"partition has {labels.shape[0]} vertices, graph has {n}")
    return labels


def q_in(g, part) -> float:
    """Fraction of the total edge weight that falls inside clusters."""
    labels = _labels(part, g.n)
    u, v = g.edges[:, 0], g.edges[:, 1]
    inside = labels[u] == labels[v]
    return float(2.0 * g.weights[inside].sum() / g.total_weight_2m)


def q_null(g, part) -> float:
    """Expected intra-cluster fraction under the strength-preserving null model."""
    labels = _labels(part, g.n)
    per_cluster = np.bincount(labels, weights=g.strength)
    return float(np.sum(per_cluster**2) / g.total_weight_2m**2)


def modularity(g, part) -> float:
    return q_in(g, part) - q_null(g, part)


def contingency(pa, pb) -> sp.csr_matrix:
    """Sparse ``k_a x k_b`` table of shared vertex counts."""
    a, b = _labels(pa), _labels(pb)
    if a.shape != b.shape:
        raise ValueError(f"partitions differ in size ({a.shape[0]} vs {b.shape[0]})")
    data = np.ones(a.shape[0], dtype=np.int64)
    return sp.coo_matrix((data, (a, b)), shape=(a.max() + 1, b.max() + 1)).tocsr()


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(pa, pb) -> float:
    """Normalized mutual information ``2 I(A;B) / (H(A) + H(B))``.

    Two single-cluster partitions score 1; a single-cluster partition
    against any other scores 0.
    """
    table = contingency(pa, pb)
    n = float(table.sum())
    ha = _entropy(np.asarray(table.sum(axis=1)).ravel(), n)
    hb = _entropy(np.asarray(table.sum(axis=0)).ravel(), n)
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    coo = table.tocoo()
    nij = coo.data.astype(np.float64)
    row = np.asarray(table.sum(axis=1)).ravel()[coo.row]
    col = np.asarray(table.sum(axis=0)).ravel()[coo.col]
    mi = float(np.sum(nij / n * np.log(nij * n / (row * col))))
    return float(min(1.0, max(0.0, 2.0 * mi / (ha + hb))))


def _pairs(counts):
    counts = np.asarray(counts, dtype=np.int64)
    return int(np.sum(counts * (counts - 1) // 2))


def pair_agreement(pa, pb) -> tuple[int, int]:
    """``(correct_together, wrong)`` over unordered vertex pairs.

    ``correct_together`` counts pairs sharing a cluster in both partitions,
    ``wrong`` pairs sharing a cluster in exactly one of them.
    """
    table = contingency(pa, pb)
    both = _pairs(table.data)
    in_a = _pairs(np.asarray(table.sum(axis=1)).ravel())
    in_b = _pairs(np.asarray(table.sum(axis=0)).ravel())
    return both, in_a + in_b - 2 * both


def cluster_sizes(part) -> list[int]:
    """Cluster sizes, largest first."""
    return sorted(np.bincount(_labels(part)).tolist(), reverse=True)
