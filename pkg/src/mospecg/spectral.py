"""Spectral machinery for the weighted aggregate modularity.

For weights ``(g1, g2)`` with ``g1 + g2 = 1`` the aggregate matrix is

    BW[i, j] = g1 * w_ij - g2 * s_i * s_j / 2m

and, for a partition with cluster-indicator matrix ``S``,
``QW = trace(S^T BW S) / 2m``.  Writing ``BW = U diag(lam) U^T`` and keeping
the ``p`` eigenpairs of largest ``|lam|`` turns QW into a vector-partitioning
objective: each vertex gets a positive vector ``rp_i`` (components
``sqrt(lam_j) u_ij`` for ``lam_j >= 0``) and a negative vector ``rn_i``
(``sqrt(-lam_j) u_ij`` for ``lam_j < 0``), each cluster the sums ``Rp_t`` and
``Rn_t`` of its members' vectors, and

    QW ~= sum_t (|Rp_t|^2 - |Rn_t|^2) / 2m,

exactly when ``p = n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .graph import Graph
from .metrics import q_in, q_null
from .partition import Partition

__all__ = [
    "ClusterVectors",
    "EigenSolverError",
    "GammaPair",
    "SpectralContext",
    "best_target",
    "build_bw",
    "bw_operator",
    "eigen_top_abs",
    "estimate_k",
    "make_context",
    "move_gain",
    "qw_exact",
    "qw_spectral",
]

# dense decomposition below this size, or when p is a large share of n
DENSE_MAX_N = 512
MIN_SCALED_GAMMA1 = 1e-6


class EigenSolverError(RuntimeError):
    """The iterative eigensolver did not converge."""


@dataclass(frozen=True)
class GammaPair:
    """Weights of the intra-cluster and null-model terms; they sum to one."""

    gamma1: float
    gamma2: float

    def __post_init__(self):
        g1, g2 = float(self.gamma1), float(self.gamma2)
        if not (0.0 <= g1 <= 1.0 and 0.0 <= g2 <= 1.0):
            raise ValueError(f"gamma weights must lie in [0, 1], got ({g1}, {g2})")
        if abs(g1 + g2 - 1.0) > 1e-12:
            raise ValueError(f"gamma1 + gamma2 must equal 1, got {g1 + g2!r}")
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)

    @classmethod
    def from_gamma1(cls, gamma1: float) -> "GammaPair":
        return cls(gamma1, 1.0 - gamma1)

    @property
    def resolution(self) -> float:
        """``gamma2 / gamma1``; infinite when ``gamma1 == 0``."""
        return self.gamma2 / self.gamma1 if self.gamma1 > 0 else math.inf

    @property
    def spectrum_scale(self) -> float:
        """Factor turning BW into the resolution-adjusted modularity matrix.

        ``BW / gamma1`` is ``A - (gamma2/gamma1) s s^T / 2m``; it is the
        matrix whose spectrum the cluster-count estimate reads.  With
        ``gamma1 == 0`` there is no such matrix and BW is used unscaled.
        Below ``MIN_SCALED_GAMMA1`` the division would only amplify rounding
        noise, so those weights are treated like zero.
        """
        return 1.0 / self.gamma1 if self.gamma1 >= MIN_SCALED_GAMMA1 else 1.0


MODULARITY = GammaPair(0.5, 0.5)


def build_bw(g: Graph, gamma: GammaPair) -> np.ndarray:
    """Dense weighted aggregate modularity matrix of ``g``."""
    s = g.strength
    bw = gamma.gamma1 * g.dense()
    bw -= (gamma.gamma2 / g.total_weight_2m) * np.outer(s, s)
    return bw


def bw_operator(g: Graph, gamma: GammaPair) -> spla.LinearOperator:
    """Matrix-free BW: ``x -> g1 * A x - g2 * (s.x / 2m) s``."""
    a = g.adjacency
    s = np.asarray(g.strength)
    g1, g2 = gamma.gamma1, gamma.gamma2
    two_m = g.total_weight_2m

    def matvec(x):
        x = np.asarray(x).reshape(-1)
        return g1 * (a @ x) - (g2 * (s @ x) / two_m) * s

    def matmat(x):
        return g1 * (a @ x) - np.outer(s, (g2 / two_m) * (s @ x))

    return spla.LinearOperator((g.n, g.n), matvec=matvec, matmat=matmat,
                               rmatvec=matvec, dtype=np.float64)


def _order_by_magnitude(vals, vecs, p):
    order = np.argsort(-np.abs(vals), kind="stable")[:p]
    return vals[order], vecs[:, order]


def eigen_top_abs(bw, p: int, method: str = "auto", tol: float = 0.0, seed: int = 0):
    """The ``p`` eigenpairs of a symmetric matrix with the largest ``|lambda|``.

    ``bw`` may be a dense array or a :class:`scipy.sparse.linalg.LinearOperator`.
    Eigenvalues are returned sorted by decreasing magnitude, eigenvectors as
    the columns of an ``n x p`` orthonormal matrix.

    ``method='auto'`` uses a dense symmetric decomposition when ``n`` is at
    most 512 or ``p > n/4``, otherwise implicitly restarted Lanczos (ARPACK)
    on ``bw``.  If Lanczos fails to converge and ``bw`` is dense the dense
    path is taken instead; for an operator :class:`EigenSolverError` is raised.
    """
    n = bw.shape[0]
    if not 1 <= p <= n:
        raise ValueError(f"p must lie in [1, {n}], got {p}")
    dense = isinstance(bw, np.ndarray)
    if method == "auto":
        method = "dense" if (dense and (n <= DENSE_MAX_N or 4 * p > n)) else "lanczos"
    if method == "dense":
        if not dense:
            bw = bw @ np.eye(n)
        vals, vecs = np.linalg.eigh(bw)
        return _order_by_magnitude(vals, vecs, p)
    if method != "lanczos":
        raise ValueError(f"unknown method {method!r}")
    if p >= n - 1:
        # ARPACK needs k < n - 1
        return eigen_top_abs(bw if dense else bw @ np.eye(n), p, method="dense")
    v0 = np.random.default_rng(seed).standard_normal(n)
    try:
        vals, vecs = spla.eigsh(bw, k=p, which="LM", tol=tol, v0=v0,
                                ncv=min(n, max(2 * p + 1, 20)))
    except spla.ArpackNoConvergence as exc:
        if dense:
            return eigen_top_abs(bw, p, method="dense")
        raise EigenSolverError(f"Lanczos did not converge for p={p}") from exc
    return _order_by_magnitude(vals, vecs, p)


def _algebraic_top(bw, threshold_of_chi, seed=0):
    """Largest-algebraic eigenvalues of ``bw``, enough to count those above
    ``threshold_of_chi(chi)`` where ``chi`` is the leading one."""
    n = bw.shape[0]
    v0 = np.random.default_rng(seed).standard_normal(n)
    k = min(8, n - 2)
    while True:
        try:
            vals = spla.eigsh(bw, k=k, which="LA", return_eigenvectors=False, v0=v0)
        except spla.ArpackNoConvergence as exc:
            raise EigenSolverError("Lanczos did not converge while estimating k") from exc
        vals = np.sort(vals)[::-1]
        if vals[-1] < threshold_of_chi(vals[0]) or k >= n - 2:
            return vals
        k = min(2 * k, n - 2)


def estimate_k(eigenvalues, chi=None) -> int:
    """Upper bound on the number of clusters from the spectrum.

    ``k' = #{lambda >= sqrt(chi)}`` where ``chi`` is the largest eigenvalue,
    and the estimate is ``max(1, floor(1.25 k'))``.  A non-positive ``chi``
    gives 1.
    """
    vals = np.asarray(eigenvalues, dtype=np.float64)
    if chi is None:
        chi = float(vals.max())
    if chi <= 0:
        return 1
    k_prime = int(np.count_nonzero(vals >= math.sqrt(chi)))
    return max(1, math.floor(1.25 * k_prime))


def _count_above_root(vals, chi):
    return 0 if chi <= 0 else int(np.count_nonzero(vals >= math.sqrt(chi)))


@dataclass(frozen=True, eq=False)
class SpectralContext:
    """Eigen-data for one ``(g1, g2)`` point and the vertex vectors built from it.

    ``chi`` and ``k_prime`` refer to the spectrum of ``BW * gamma.spectrum_scale``
    (the resolution-adjusted modularity matrix); ``eigenvalues`` are those of BW.
    """

    gamma: GammaPair
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rp: np.ndarray
    rn: np.ndarray
    chi: float
    k_prime: int
    k_estimate: int
    two_m: float

    @property
    def n(self) -> int:
        return int(self.rp.shape[0])

    @property
    def p(self) -> int:
        return int(self.eigenvalues.shape[0])


def vertex_vectors(eigenvalues, eigenvectors):
    """Positive and negative vertex vectors (rows) from eigenpairs."""
    lam = np.asarray(eigenvalues)
    pos = lam >= 0
    root = np.sqrt(np.abs(lam))
    scaled = eigenvectors * root
    rp = np.where(pos, scaled, 0.0)
    rn = np.where(pos, 0.0, scaled)
    return np.ascontiguousarray(rp), np.ascontiguousarray(rn)


def make_context(g: Graph, gamma: GammaPair, p: int, method: str = "auto",
                 k_max: int | None = None, seed: int = 0) -> SpectralContext:
    """Decompose BW for ``g`` and ``gamma`` keeping ``p`` eigenpairs.

    The cluster-count estimate counts, over the whole spectrum of the
    resolution-adjusted matrix, the eigenvalues at or above the square root
    of the leading one.
    """
    n = g.n
    p = int(p)
    if not 1 <= p <= n:
        raise ValueError(f"p must lie in [1, {n}], got {p}")
    scale = gamma.spectrum_scale
    if method == "auto":
        method = "dense" if (n <= DENSE_MAX_N or 4 * p > n) else "lanczos"

    if method == "dense":
        vals_all, vecs_all = np.linalg.eigh(build_bw(g, gamma))
        vals, vecs = _order_by_magnitude(vals_all, vecs_all, p)
        spectrum = vals_all * scale
    else:
        op = bw_operator(g, gamma)
        vals, vecs = eigen_top_abs(op, p, method="lanczos", seed=seed)
        scaled_op = op * scale if scale != 1.0 else op
        spectrum = _algebraic_top(scaled_op, lambda c: math.sqrt(c) if c > 0 else math.inf,
                                  seed=seed)

    chi = float(spectrum.max())
    k_prime = _count_above_root(spectrum, chi)
    k = estimate_k(spectrum, chi)
    k = min(k, n if k_max is None else min(n, k_max))
    rp, rn = vertex_vectors(vals, vecs)
    for arr in (vals, vecs, rp, rn):
        arr.setflags(write=False)
    return SpectralContext(gamma=gamma, eigenvalues=vals, eigenvectors=vecs, rp=rp, rn=rn,
                           chi=chi, k_prime=k_prime, k_estimate=int(k),
                           two_m=g.total_weight_2m)


@dataclass
class ClusterVectors:
    """Per-cluster sums of the vertex vectors; rows are cluster labels."""

    Rp: np.ndarray
    Rn: np.ndarray
    sizes: np.ndarray

    @classmethod
    def from_labels(cls, ctx: SpectralContext, labels, k: int) -> "ClusterVectors":
        labels = np.asarray(labels, dtype=np.int64)
        Rp = np.zeros((k, ctx.p))
        Rn = np.zeros((k, ctx.p))
        np.add.at(Rp, labels, ctx.rp)
        np.add.at(Rn, labels, ctx.rn)
        return cls(Rp, Rn, np.bincount(labels, minlength=k).astype(np.int64))

    @property
    def k(self) -> int:
        return int(self.Rp.shape[0])

    def copy(self) -> "ClusterVectors":
        return ClusterVectors(self.Rp.copy(), self.Rn.copy(), self.sizes.copy())

    def move(self, ctx: SpectralContext, i: int, frm: int, to: int) -> None:
        if frm == to:
            return
        self.Rp[frm] -= ctx.rp[i]
        self.Rn[frm] -= ctx.rn[i]
        self.Rp[to] += ctx.rp[i]
        self.Rn[to] += ctx.rn[i]
        self.sizes[frm] -= 1
        self.sizes[to] += 1


def qw_exact(g: Graph, gamma: GammaPair, part) -> float:
    """Weighted aggregate modularity ``g1 * Q_in - g2 * Q_null``."""
    return gamma.gamma1 * q_in(g, part) - gamma.gamma2 * q_null(g, part)


def qw_spectral(ctx: SpectralContext, cv: ClusterVectors) -> float:
    """``sum_t (|Rp_t|^2 - |Rn_t|^2) / 2m``."""
    return float((np.sum(cv.Rp * cv.Rp) - np.sum(cv.Rn * cv.Rn)) / ctx.two_m)


def _affinity(ctx, cv, i):
    """``Rp_t . rp_i - Rn_t . rn_i`` for every cluster ``t``."""
    return cv.Rp @ ctx.rp[i] - cv.Rn @ ctx.rn[i]


def _self_affinity(ctx, i):
    return float(ctx.rp[i] @ ctx.rp[i] - ctx.rn[i] @ ctx.rn[i])


def move_gain(ctx: SpectralContext, cv: ClusterVectors, i: int, frm: int, to: int) -> float:
    """Change of the spectral QW when vertex ``i`` moves from ``frm`` to ``to``.

    ``cv`` describes the partition before the move, so ``cv.Rp[frm]``
    still contains ``rp_i``.
    """
    k = cv.k
    if not (0 <= frm < k and 0 <= to < k):
        raise IndexError(f"cluster label out of range [0, {k})")
    if frm == to:
        return 0.0
    aff = _affinity(ctx, cv, i)
    own = aff[frm] - _self_affinity(ctx, i)
    return float(2.0 * (aff[to] - own) / ctx.two_m)


# moves whose score improvement does not exceed this are not taken
GAIN_TOL = 1e-12


def best_target(ctx: SpectralContext, cv: ClusterVectors, i: int, current: int) -> int:
    """Cluster that vertex ``i`` (now in ``current``) should move to.

    Every other cluster ``t`` is scored by the exact move gain
    ``2 (aff_t - aff_own) / 2m`` where ``aff_t = Rp_t . rp_i - Rn_t . rn_i``
    and ``aff_own`` is the same quantity for the current cluster without
    ``i``.  Staying scores 0.  Ties go to the lowest label; ``current`` is
    returned unless some move gains more than ``GAIN_TOL``.
    """
    aff = _affinity(ctx, cv, i)
    gains = 2.0 * (aff - (aff[current] - _self_affinity(ctx, i))) / ctx.two_m
    gains[current] = -np.inf
    t = int(np.argmax(gains))
    return t if gains[t] > GAIN_TOL else int(current)


def spectral_partition_qw(ctx: SpectralContext, part) -> float:
    """Spectral QW of a partition, recomputing its cluster vectors."""
    labels = part.labels if isinstance(part, Partition) else np.asarray(part)
    cv = ClusterVectors.from_labels(ctx, labels, int(labels.max()) + 1)
    return qw_spectral(ctx, cv)
