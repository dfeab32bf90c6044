"""Undirected, optionally weighted graphs and the text formats they are read from.

Edge lists are whitespace separated, one edge per line (``u v`` or
``u v w``), with ``#`` starting a comment.  The same reader handles LFR
``network.dat`` files, which are 1-based and list every edge in both
directions; pass ``symmetric_duplicates=True`` for those.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .partition import Partition

__all__ = [
    "Graph",
    "GraphFormatError",
    "load_edge_list",
    "load_membership",
    "write_edge_list",
    "write_membership",
]


class GraphFormatError(ValueError):
    """Raised for malformed graph or membership files and invalid edge sets."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{os.fspath(path)}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected graph on vertices ``0..n-1``.

    ``edges`` holds each undirected edge once as ``(u, v)`` with ``u < v``;
    ``weights`` holds the matching non-negative weights.
    """

    n: int
    edges: np.ndarray
    weights: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if weights.shape[0] != edges.shape[0]:
            raise GraphFormatError("edges and weights differ in length")
        if self.n <= 0:
            raise GraphFormatError("graph has no vertices")
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise GraphFormatError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            u = int(edges[edges[:, 0] == edges[:, 1]][0, 0])
            raise GraphFormatError(f"self-loop at vertex {u}")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise GraphFormatError("edge weights must be finite and non-negative")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        key = lo * self.n + hi
        order = np.argsort(key, kind="stable")
        key = key[order]
        dup = np.nonzero(key[1:] == key[:-1])[0]
        if dup.size:
            u, v = divmod(int(key[dup[0]]), self.n)
            raise GraphFormatError(f"duplicate edge ({u}, {v})")
        edges = np.column_stack([lo[order], hi[order]])
        weights = weights[order]
        if not weights.sum() > 0:
            raise GraphFormatError("graph has no edge weight (2m = 0)")
        edges.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_edges(cls, edges, weights=None, n=None, name=""):
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                           dtype=np.int64).reshape(-1, 2)
        if weights is None:
            weights = np.ones(edges.shape[0])
        if n is None:
            n = int(edges.max()) + 1 if edges.size else 0
        return cls(int(n), edges, weights, name=name)

    @classmethod
    def from_dense(cls, w, name=""):
        """Build from a symmetric weight matrix; the diagonal is ignored."""
        w = np.asarray(w, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise GraphFormatError("weight matrix must be square")
        if not np.allclose(w, w.T, rtol=0, atol=1e-12):
            raise GraphFormatError("weight matrix must be symmetric")
        iu, ju = np.triu_indices(w.shape[0], k=1)
        vals = w[iu, ju]
        keep = vals != 0
        return cls(w.shape[0], np.column_stack([iu[keep], ju[keep]]), vals[keep], name=name)

    @property
    def m(self) -> int:
        """Number of undirected edges."""
        return int(self.edges.shape[0])

    @property
    def is_weighted(self) -> bool:
        return bool(np.any(self.weights != 1.0))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        u, v = self.edges[:, 0], self.edges[:, 1]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.concatenate([self.weights, self.weights])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def strength(self) -> np.ndarray:
        s = np.zeros(self.n)
        np.add.at(s, self.edges[:, 0], self.weights)
        np.add.at(s, self.edges[:, 1], self.weights)
        s.setflags(write=False)
        return s

    @property
    def degree(self) -> np.ndarray:
        return np.asarray(np.diff(self.adjacency.indptr))

    @cached_property
    def total_weight_2m(self) -> float:
        return float(2.0 * self.weights.sum())

    def neighbors(self, i: int):
        """Return ``(neighbor ids, weights)`` of vertex ``i``."""
        a = self.adjacency
        lo, hi = a.indptr[i], a.indptr[i + 1]
        return a.indices[lo:hi], a.data[lo:hi]

    def dense(self) -> np.ndarray:
        return self.adjacency.toarray()

    def is_connected(self) -> bool:
        ncomp, _ = sp.csgraph.connected_components(self.adjacency, directed=False)
        return ncomp == 1

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"Graph({label}n={self.n}, m={self.m}, 2m={self.total_weight_2m:g})"


def _resolve_base(index_base, min_id, path):
    if index_base == "auto":
        return 1 if min_id == 1 else 0
    if index_base in ("zero", 0):
        return 0
    if index_base in ("one", 1):
        if min_id < 1:
            raise GraphFormatError("id 0 found in a one-based file", path)
        return 1
    raise ValueError(f"index_base must be 'auto', 'zero' or 'one', got {index_base!r}")


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line.split()


def load_edge_list(path, index_base="auto", n=None, symmetric_duplicates=False):
    """Read an edge list into a :class:`Graph`.

    Parameters
    ----------
    path : path-like
        Text file with ``u v`` or ``u v w`` per line.
    index_base : {'auto', 'zero', 'one'}
        With ``'auto'`` ids are shifted down by one iff the smallest id in
        the file is 1.
    n : int, optional
        Vertex count, for graphs whose highest ids are isolated vertices.
    symmetric_duplicates : bool
        Accept files that list each edge as both ``u v`` and ``v u`` (the
        LFR convention).  The two copies must carry equal weights.  Any other
        repeated edge is still an error.
    """
    us, vs, ws, lines = [], [], [], []
    for lineno, tok in _data_lines(path):
        if len(tok) not in (2, 3):
            raise GraphFormatError(f"expected 'u v [w]', got {len(tok)} fields", path, lineno)
        try:
            u, v = int(tok[0]), int(tok[1])
            w = float(tok[2]) if len(tok) == 3 else 1.0
        except ValueError:
            raise GraphFormatError("non-numeric field", path, lineno) from None
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", path, lineno)
        us.append(u)
        vs.append(v)
        ws.append(w)
        lines.append(lineno)
    if not us:
        raise GraphFormatError("empty graph", path)
    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    w = np.asarray(ws)
    min_id = int(min(u.min(), v.min()))
    if min_id < 0:
        raise GraphFormatError("negative vertex id", path)
    base = _resolve_base(index_base, min_id, path)
    u -= base
    v -= base

    lo, hi = np.minimum(u, v), np.maximum(u, v)
    seen = {}
    keep = []
    for idx, pair in enumerate(zip(lo.tolist(), hi.tolist())):
        first = seen.get(pair)
        if first is None:
            seen[pair] = (idx, u[idx] < v[idx])
            keep.append(idx)
            continue
        j, forward = first
        mirrored = forward != (u[idx] < v[idx])
        if symmetric_duplicates and mirrored and w[j] == w[idx]:
            continue
        raise GraphFormatError(
            f"duplicate edge ({lo[idx] + base}, {hi[idx] + base}), first seen on line {lines[j]}",
            path, lines[idx])
    keep = np.asarray(keep)
    if n is None:
        n = int(hi.max()) + 1
    elif hi.max() >= n:
        raise GraphFormatError(f"vertex id {int(hi.max()) + base} exceeds n={n}", path)
    name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    return Graph(n, np.column_stack([lo[keep], hi[keep]]), w[keep], name=name)


def load_membership(path, n, index_base="auto"):
    """Read ``vertex community`` lines into a :class:`Partition` of ``n`` vertices.

    Community ids may be arbitrary integers; they are renumbered.  LFR
    ``community.dat`` files are read as-is (1-based, detected by ``'auto'``).
    """
    verts, comms, lines = [], [], []
    for lineno, tok in _data_lines(path):
        if len(tok) != 2:
            raise GraphFormatError(
                f"expected 'vertex community', got {len(tok)} fields", path, lineno)
        try:
            verts.append(int(tok[0]))
            comms.append(int(tok[1]))
        except ValueError:
            raise GraphFormatError("non-integer field", path, lineno) from None
        lines.append(lineno)
    if not verts:
        raise GraphFormatError("empty membership file", path)
    v = np.asarray(verts, dtype=np.int64)
    base = _resolve_base(index_base, int(v.min()), path)
    v -= base
    bad = np.nonzero((v < 0) | (v >= n))[0]
    if bad.size:
        i = bad[0]
        raise GraphFormatError(f"vertex id {verts[i]} out of range for n={n}", path, lines[i])
    labels = np.zeros(n, dtype=np.int64)
    first_line = np.zeros(n, dtype=np.int64)
    for i, (vert, comm) in enumerate(zip(v.tolist(), comms)):
        if first_line[vert]:
            raise GraphFormatError(
                f"vertex {verts[i]} assigned twice (first on line {first_line[vert]})",
                path, lines[i])
        first_line[vert] = lines[i]
        labels[vert] = comm
    missing = np.nonzero(first_line == 0)[0]
    if missing.size:
        raise GraphFormatError(
            f"{missing.size} vertices without a community, first is {int(missing[0]) + base}",
            path)
    return Partition(labels)


def write_edge_list(g: Graph, path, weights=None):
    """Write ``g`` as a 0-based edge list.  Weights are written when the graph
    is weighted, or always/never when ``weights`` is True/False."""
    if weights is None:
        weights = g.is_weighted
    with open(path, "w", encoding="utf-8") as fh:
        for (u, v), w in zip(g.edges.tolist(), g.weights.tolist()):
            if weights:
                fh.write(f"{u} {v} {w!r}\n")
            else:
                fh.write(f"{u} {v}\n")


def write_membership(part, path):
    """Write ``vertex cluster`` pairs, 0-based, one per line."""
    labels = part.labels if isinstance(part, Partition) else np.asarray(part)
    with open(path, "w", encoding="utf-8") as fh:
        for v, c in enumerate(labels.tolist()):
            fh.write(f"{v} {c}\n")
