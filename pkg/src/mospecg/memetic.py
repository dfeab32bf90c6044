"""Memetic optimizer of the spectral weighted aggregate modularity.

A small population of partitions into at most ``k`` clusters evolves by
cluster-transplant crossover, random relabelling mutation and greedy
single-vertex local search.  Every operator works on cluster vectors, so
each vertex move costs ``O(k p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .partition import Partition
from .spectral import GAIN_TOL, ClusterVectors, SpectralContext, qw_spectral

__all__ = [
    "Individual",
    "MemeticParams",
    "crossover",
    "evolve",
    "init_individual",
    "local_search",
    "mutate",
    "replacement_count",
    "roulette_weights",
]


@dataclass(frozen=True)
class MemeticParams:
    """Generations, population size, offspring share (percent), local-search
    sweeps and seed."""

    n_generations: int = 50
    pop_size: int = 5
    offspring_pct: float = 40
    local_search_iters: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_generations < 1:
            raise ValueError("n_generations must be at least 1")
        if self.pop_size < 2:
            raise ValueError("pop_size must be at least 2")
        if not 0 < self.offspring_pct <= 100:
            raise ValueError("offspring_pct must lie in (0, 100]")
        if self.local_search_iters < 0:
            raise ValueError("local_search_iters must be non-negative")


class Individual:
    """A partition with labels in ``[0, k)``, its cluster vectors and cached QW.

    Empty clusters keep their labels so ``k`` is fixed for a run.
    """

    __slots__ = ("labels", "cv", "fitness")

    def __init__(self, labels: np.ndarray, cv: ClusterVectors, fitness: float):
        self.labels = labels
        self.cv = cv
        self.fitness = float(fitness)

    @classmethod
    def from_labels(cls, ctx: SpectralContext, labels, k: int) -> "Individual":
        labels = np.array(labels, dtype=np.int64)
        cv = ClusterVectors.from_labels(ctx, labels, k)
        return cls(labels, cv, qw_spectral(ctx, cv))

    @property
    def k(self) -> int:
        return self.cv.k

    @property
    def partition(self) -> Partition:
        return Partition(self.labels)

    def copy(self) -> "Individual":
        return Individual(self.labels.copy(), self.cv.copy(), self.fitness)

    def move(self, ctx: SpectralContext, verts, targets) -> float:
        """Move ``verts[q]`` to ``targets[q]`` in order; return the fitness change."""
        verts = np.ascontiguousarray(verts, dtype=np.int64)
        targets = np.ascontiguousarray(targets, dtype=np.int64)
        if targets.shape != verts.shape:
            targets = np.broadcast_to(targets, verts.shape).copy()
        delta = _kernels.move_vertices(ctx.rp, ctx.rn, self.labels, self.cv.Rp, self.cv.Rn,
                                       self.cv.sizes, verts, targets, ctx.two_m)
        self.fitness += delta
        return delta

    def __repr__(self):
        used = int(np.count_nonzero(self.cv.sizes))
        return f"Individual(k={self.k}, nonempty={used}, fitness={self.fitness:.6f})"


def init_individual(ctx: SpectralContext, k: int, rng: np.random.Generator) -> Individual:
    """``k`` random seed vertices open one cluster each; the others join, in
    random order, the cluster they have the largest affinity with."""
    n = ctx.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    perm = rng.permutation(n)
    seeds, rest = perm[:k], perm[k:]
    labels = np.full(n, -1, dtype=np.int64)
    labels[seeds] = np.arange(k)
    cv = ClusterVectors(np.zeros((k, ctx.p)), np.zeros((k, ctx.p)), np.ones(k, dtype=np.int64))
    cv.Rp[:] = ctx.rp[seeds]
    cv.Rn[:] = ctx.rn[seeds]
    _kernels.greedy_assign(ctx.rp, ctx.rn, np.ascontiguousarray(rest), labels,
                           cv.Rp, cv.Rn, cv.sizes)
    return Individual(labels, cv, qw_spectral(ctx, cv))


def roulette_weights(fitness) -> np.ndarray:
    """Selection probabilities proportional to fitness.

    Non-positive fitnesses are shifted by ``-min + eps`` with
    ``eps = 1e-6 * (max - min + 1)`` so that every individual keeps a
    positive share and the order is preserved.
    """
    f = np.asarray(fitness, dtype=np.float64)
    lo, hi = f.min(), f.max()
    if lo <= 0:
        f = f - lo + 1e-6 * (hi - lo + 1.0)
    total = f.sum()
    if not np.isfinite(total) or total <= 0:
        return np.full(f.shape, 1.0 / f.size)
    return f / total


def _pick_parents(fitness, rng):
    w = roulette_weights(fitness)
    b = int(rng.choice(w.size, p=w))
    rest = w.copy()
    rest[b] = 0.0
    if rest.sum() <= 0:
        rest = np.ones_like(rest)
        rest[b] = 0.0
    d = int(rng.choice(w.size, p=rest / rest.sum()))
    return b, d


def transplant_target(pb: Individual, pd: Individual, ls: int) -> int:
    """Cluster of ``pd`` most aligned with cluster ``ls`` of ``pb`` (lowest label on ties)."""
    score = pd.cv.Rp @ pb.cv.Rp[ls] + pd.cv.Rn @ pb.cv.Rn[ls]
    return int(np.argmax(score))


def crossover_pair(ctx: SpectralContext, pb: Individual, pd: Individual,
                   rng: np.random.Generator) -> Individual:
    """Copy ``pd`` and pull into one of its clusters the members of a random
    cluster of ``pb``."""
    child = pd.copy()
    vs = int(rng.integers(ctx.n))
    ls = int(pb.labels[vs])
    ld = transplant_target(pb, pd, ls)
    child.move(ctx, np.nonzero(pb.labels == ls)[0], ld)
    return child


def crossover(pop: list[Individual], ctx: SpectralContext, rng: np.random.Generator) -> list[Individual]:
    """Produce ``len(pop)`` children from roulette-selected parent pairs."""
    if len(pop) < 2:
        raise ValueError("crossover needs at least two individuals")
    fitness = [ind.fitness for ind in pop]
    children = []
    for _ in range(len(pop)):
        b, d = _pick_parents(fitness, rng)
        children.append(crossover_pair(ctx, pop[b], pop[d], rng))
    return children


def mutate(offspring: list[Individual], ctx: SpectralContext, rng: np.random.Generator) -> int:
    """Relabel a random number of random vertices of one random individual.

    Returns the index of the mutated individual.
    """
    n = ctx.n
    count = int(rng.integers(1, max(1, n // 2) + 1))
    d = int(rng.integers(len(offspring)))
    ind = offspring[d]
    verts = rng.choice(n, size=count, replace=False)
    targets = rng.integers(0, ind.k, size=count)
    ind.move(ctx, verts, targets)
    return d


def local_search(ind: Individual, ctx: SpectralContext, iters: int) -> float:
    """Sweep the vertices in index order, moving each to its best cluster when
    that strictly improves QW.  Returns the total gain."""
    if iters <= 0:
        return 0.0
    gain = _kernels.local_search(ctx.rp, ctx.rn, ind.labels, ind.cv.Rp, ind.cv.Rn, ind.cv.sizes,
                                 ctx.two_m, int(iters), GAIN_TOL)
    ind.fitness += gain
    return gain


def replacement_count(pop_size: int, offspring_pct: float) -> int:
    """Offspring admitted per generation: ``ceil(pct% of pop_size)``, capped
    at ``pop_size - 1`` below 100% so the best incumbent always survives."""
    r = math.ceil(offspring_pct * pop_size / 100 - 1e-9)
    if offspring_pct < 100:
        r = min(r, pop_size - 1)
    return max(1, r)


def evolve(ctx: SpectralContext, k: int | None = None, params: MemeticParams | None = None,
           callback=None) -> Individual:
    """Run the memetic algorithm and return the fittest final individual.

    ``k`` defaults to the context's spectral estimate.  ``callback``, if
    given, is called as ``callback(generation, population)`` after the
    initial population (generation 0) and after every generation.
    """
    params = params or MemeticParams()
    k = ctx.k_estimate if k is None else int(k)
    rng = np.random.default_rng(params.rng_seed)
    pop = [init_individual(ctx, k, rng) for _ in range(params.pop_size)]
    if callback is not None:
        callback(0, pop)
    r = replacement_count(params.pop_size, params.offspring_pct)
    for gen in range(1, params.n_generations + 1):
        children = crossover(pop, ctx, rng)
        mutate(children, ctx, rng)
        for child in children:
            local_search(child, ctx, params.local_search_iters)
        best_children = sorted(children, key=lambda ind: -ind.fitness)[:r]
        survivors = sorted(pop, key=lambda ind: -ind.fitness)[: len(pop) - r]
        pop = survivors + best_children
        if callback is not None:
            callback(gen, pop)
    return max(pop, key=lambda ind: ind.fitness)
