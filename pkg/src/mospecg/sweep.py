"""Sweep of the ``(gamma1, gamma2)`` grid: one memetic run per grid point."""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .graph import Graph, load_membership, write_membership
from .memetic import MemeticParams, evolve
from .metrics import nmi, q_in, q_null
from .partition import Partition
from .spectral import EigenSolverError, GammaPair, make_context

__all__ = [
    "CSV_COLUMNS",
    "SolutionEntry",
    "SolutionSet",
    "entry_seed",
    "gamma_grid",
    "pareto_filter",
    "resolve_p",
    "run_mospecg",
]

CSV_COLUMNS = ("gamma1", "gamma2", "q_in", "q_null", "qw", "q",
               "k_estimated", "k_found", "nmi", "runtime_seconds")


def gamma_grid(nf: int) -> list[GammaPair]:
    """``nf`` evenly spaced weight pairs from ``(0, 1)`` to ``(1, 0)``."""
    if nf < 2:
        raise ValueError("nf must be at least 2")
    out = []
    for i in range(nf):
        g1 = 1.0 if i == nf - 1 else i * (1.0 / (nf - 1))
        out.append(GammaPair(g1, 1.0 - g1))
    return out


def resolve_p(p_spec, n: int) -> int:
    """Eigenpair count from a fraction of ``n`` (float in (0, 1]) or an absolute int."""
    if isinstance(p_spec, (int, np.integer)) and not isinstance(p_spec, bool):
        p = int(p_spec)
    else:
        frac = float(p_spec)
        if not 0 < frac <= 1:
            raise ValueError(f"fractional p must lie in (0, 1], got {frac}")
        p = max(1, math.floor(frac * n))
    if not 1 <= p <= n:
        raise ValueError(f"p must lie in [1, {n}], got {p}")
    return p


def entry_seed(rng_seed: int, index: int) -> int:
    """Seed for grid entry ``index``; independent of sweep order."""
    return int(np.random.SeedSequence([int(rng_seed), int(index)]).generate_state(1)[0])


@dataclass
class SolutionEntry:
    gamma: GammaPair
    partition: Partition | None
    q_in: float = math.nan
    q_null: float = math.nan
    qw: float = math.nan
    q: float = math.nan
    k_found: int = 0
    k_estimated: int = 0
    nmi: float | None = None
    runtime_seconds: float = 0.0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.partition is None

    @classmethod
    def evaluate(cls, g: Graph, gamma: GammaPair, part: Partition, k_estimated: int,
                 truth: Partition | None = None, runtime: float = 0.0) -> "SolutionEntry":
        qi, qn = q_in(g, part), q_null(g, part)
        return cls(gamma=gamma, partition=part, q_in=qi, q_null=qn,
                   qw=gamma.gamma1 * qi - gamma.gamma2 * qn, q=qi - qn,
                   k_found=part.k, k_estimated=int(k_estimated),
                   nmi=None if truth is None else nmi(part, truth), runtime_seconds=runtime)

    def row(self) -> dict:
        def fmt(x):
            return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))
        return {
            "gamma1": repr(self.gamma.gamma1), "gamma2": repr(self.gamma.gamma2),
            "q_in": fmt(self.q_in), "q_null": fmt(self.q_null), "qw": fmt(self.qw), "q": fmt(self.q),
            "k_estimated": str(self.k_estimated), "k_found": str(self.k_found),
            "nmi": fmt(self.nmi), "runtime_seconds": f"{self.runtime_seconds:.6f}",
        }


def membership_filename(gamma: GammaPair) -> str:
    return f"gamma1_{gamma.gamma1:.4f}.membership"


@dataclass
class SolutionSet:
    """Grid results ordered by ascending ``gamma1``; dominated entries are kept."""

    entries: list[SolutionEntry]
    graph: Graph | None = field(default=None, repr=False)

    @property
    def nf(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def entry_for(self, gamma1: float) -> SolutionEntry:
        return min(self.entries, key=lambda e: abs(e.gamma.gamma1 - gamma1))

    def successful(self) -> list[SolutionEntry]:
        return [e for e in self.entries if not e.failed]

    def write(self, out_dir) -> Path:
        """Write ``solutions.csv`` and one membership file per successful entry."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "solutions.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for e in self.entries:
                writer.writerow(e.row())
        for e in self.successful():
            write_membership(e.partition, out / membership_filename(e.gamma))
        return out / "solutions.csv"

    @classmethod
    def read(cls, out_dir, g: Graph, truth: Partition | None = None) -> "SolutionSet":
        """Load a sweep written by :meth:`write`, recomputing objectives from
        the membership files.  Rows without a membership file load as failed."""
        out = Path(out_dir)
        entries = []
        with open(out / "solutions.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or set(CSV_COLUMNS) - set(rows[0]):
            raise ValueError(f"{out / 'solutions.csv'}: missing columns or rows")
        for row in rows:
            gamma = GammaPair(float(row["gamma1"]), float(row["gamma2"]))
            path = out / membership_filename(gamma)
            runtime = float(row["runtime_seconds"] or 0.0)
            if not path.exists():
                entries.append(SolutionEntry(gamma, None, error="no membership file"))
                continue
            part = load_membership(path, g.n, index_base="zero")
            entries.append(SolutionEntry.evaluate(g, gamma, part, int(row["k_estimated"]),
                                                  truth, runtime))
        entries.sort(key=lambda e: e.gamma.gamma1)
        return cls(entries, g)


def _run_entry(g, gamma, p, params, truth):
    t0 = time.perf_counter()
    try:
        ctx = make_context(g, gamma, p, seed=params.rng_seed)
        best = evolve(ctx, params=params)
    except (EigenSolverError, np.linalg.LinAlgError) as exc:
        return SolutionEntry(gamma, None, runtime_seconds=time.perf_counter() - t0,
                             error=str(exc))
    return SolutionEntry.evaluate(g, gamma, best.partition, ctx.k_estimate, truth,
                                  time.perf_counter() - t0)


def run_mospecg(g: Graph, nf: int = 11, memetic: MemeticParams | None = None, p_spec=0.1,
                rng_seed: int = 0, truth: Partition | None = None,
                workers: int = 1) -> SolutionSet:
    """Optimize the weighted aggregate modularity at each of ``nf`` grid points.

    Entry ``i`` runs with the seed ``entry_seed(rng_seed, i)``, so results do
    not depend on ``workers``.  ``memetic.rng_seed`` is ignored.  Entries whose
    eigen-decomposition fails are kept with ``partition=None``.
    """
    memetic = memetic or MemeticParams()
    p = resolve_p(p_spec, g.n)
    grid = gamma_grid(nf)
    jobs = [(g, gamma, p, replace(memetic, rng_seed=entry_seed(rng_seed, i)), truth)
            for i, gamma in enumerate(grid)]
    if workers is None or workers <= 0:
        workers = os.cpu_count() or 1
    if workers == 1 or nf == 1:
        entries = [_run_entry(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, nf)) as pool:
            entries = list(pool.map(_run_entry, *zip(*jobs)))
    return SolutionSet(entries, g)


def dominates(a: SolutionEntry, b: SolutionEntry) -> bool:
    """Higher intra-cluster fraction and no higher null term, or vice versa."""
    return ((a.q_in > b.q_in and a.q_null <= b.q_null)
            or (a.q_in >= b.q_in and a.q_null < b.q_null))


def pareto_filter(solutions) -> list[SolutionEntry]:
    """Successful entries not dominated by any other successful entry."""
    entries = [e for e in solutions if not e.failed]
    return [e for e in entries if not any(dominates(o, e) for o in entries if o is not e)]
