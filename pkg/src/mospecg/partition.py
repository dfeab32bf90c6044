"""Vertex partitions stored as compact label vectors."""

from __future__ import annotations

import numpy as np

__all__ = ["Partition", "compact_labels"]


def compact_labels(labels) -> np.ndarray:
    """Relabel to ``0..k-1`` in order of first appearance."""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError("labels must be one-dimensional")
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    # rank of each distinct label by the position where it first occurs
    order = np.argsort(np.argsort(first, kind="stable"), kind="stable")
    return order[inverse.ravel()].astype(np.int64)


class Partition:
    """A hard clustering of the vertices ``0..n-1``.

    Labels are always compacted: they cover ``[0, k)`` and every label is
    used at least once.
    """

    __slots__ = ("labels",)

    def __init__(self, labels):
        labels = compact_labels(labels)
        labels.setflags(write=False)
        self.labels = labels

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_clusters(cls, clusters, n: int | None = None) -> "Partition":
        """Build from an iterable of vertex collections covering ``0..n-1``."""
        clusters = [np.asarray(list(c), dtype=np.int64) for c in clusters]
        if n is None:
            n = int(sum(len(c) for c in clusters))
        labels = np.full(n, -1, dtype=np.int64)
        for t, members in enumerate(clusters):
            if np.any(labels[members] >= 0):
                raise ValueError("clusters overlap")
            labels[members] = t
        if np.any(labels < 0):
            raise ValueError("clusters do not cover every vertex")
        return cls(labels)

    @property
    def n(self) -> int:
        return int(self.labels.shape[0])

    @property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if self.n else 0

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def clusters(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(self.sizes())[:-1]
        return np.split(order, bounds)

    def same_clustering(self, other: "Partition") -> bool:
        """True when both partitions group the vertices identically."""
        return self.n == other.n and bool(np.array_equal(self.labels, other.labels))

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.same_clustering(other)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Partition(n={self.n}, k={self.k}, sizes={sorted(self.sizes().tolist(), reverse=True)})"
