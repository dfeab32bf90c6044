"""Command-line front end: ``mospecg run | ensemble | eval``.

Exit status is 0 on success, 1 for usage errors, 2 for unreadable or
inconsistent input data and 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .ensemble import run_specg_ec
from .graph import GraphFormatError, load_edge_list, load_membership, write_membership
from .memetic import MemeticParams
from .metrics import cluster_sizes, modularity, nmi, pair_agreement, q_in, q_null
from .spectral import EigenSolverError
from .sweep import SolutionSet, run_mospecg

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
SEED_ENV = "MOSPECG_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_graph_args(p, truth_required=False):
    p.add_argument("--graph", required=True, help="edge list, 'u v [w]' per line")
    p.add_argument("--truth", required=truth_required, help="membership file 'vertex community'")
    p.add_argument("--index-base", choices=("auto", "zero", "one"), default="auto",
                   help="vertex id base of the input files (default: auto)")
    p.add_argument("--lfr", action="store_true",
                   help="accept edges listed in both directions (LFR network.dat)")


def _add_search_args(p):
    p.add_argument("--nf", type=int, default=11, help="grid points (default 11)")
    p.add_argument("--ng", type=int, default=50, help="generations (default 50)")
    p.add_argument("--np", dest="pop", type=int, default=5, help="population size (default 5)")
    p.add_argument("--no", dest="offspring", type=float, default=40,
                   help="offspring admitted per generation, percent (default 40)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--p-frac", type=float, default=0.1,
                       help="eigenpairs as a fraction of n (default 0.1)")
    group.add_argument("--p", dest="p_abs", type=int, help="absolute number of eigenpairs")
    p.add_argument("--it", type=int, default=1, help="local search sweeps (default 1)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"random seed (default ${SEED_ENV}, else 0)")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                   help="parallel grid points (default: all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mospecg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="sweep the objective weights, one partition per grid point")
    _add_graph_args(run)
    _add_search_args(run)
    run.add_argument("--out", required=True, help="output directory")

    ens = sub.add_parser("ensemble", help="consensus partition from a sweep")
    _add_graph_args(ens)
    _add_search_args(ens)
    ens.add_argument("--tau", type=float, default=0.5, help="consensus threshold (default 0.5)")
    ens.add_argument("--solutions", help="directory of a previous 'run' to reuse")
    ens.add_argument("--out", required=True, help="output directory")
    ens.add_argument("--emit-consensus", action="store_true", help="also write consensus.csv")
    ens.add_argument("--min-k", type=int, default=2,
                     help="lower bound on the cluster bound when the graph is splittable "
                          "(default 2; 1 disables)")

    ev = sub.add_parser("eval", help="compare a partition with a reference")
    ev.add_argument("--pred", required=True, help="membership file to evaluate")
    ev.add_argument("--truth", required=True, help="reference membership file")
    ev.add_argument("--graph", help="edge list; adds Q, Q_in and Q_null to the report")
    ev.add_argument("--index-base", choices=("auto", "zero", "one"), default="auto")
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"${SEED_ENV} must be an integer, got {env!r}") from None


def _memetic(args) -> MemeticParams:
    try:
        return MemeticParams(args.ng, args.pop, args.offspring, args.it, _seed(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _p_spec(args):
    return args.p_abs if args.p_abs is not None else args.p_frac


def _load(args):
    g = load_edge_list(args.graph, index_base=args.index_base, symmetric_duplicates=args.lfr)
    truth = load_membership(args.truth, g.n, index_base=args.index_base) if args.truth else None
    return g, truth


def _sweep(args, g, truth) -> SolutionSet:
    if args.nf < 2:
        raise UsageError("--nf must be at least 2")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    sols = run_mospecg(g, args.nf, _memetic(args), _p_spec(args), _seed(args), truth,
                       workers=args.workers)
    failed = [e for e in sols if e.failed]
    for e in failed:
        print(f"warning: gamma1={e.gamma.gamma1:.4f} failed: {e.error}", file=sys.stderr)
    if len(failed) == len(sols):
        raise EigenSolverError("every grid point failed")
    return sols


def cmd_run(args) -> int:
    g, truth = _load(args)
    sols = _sweep(args, g, truth)
    csv_path = sols.write(args.out)
    for e in sols.successful():
        extra = "" if e.nmi is None else f"  nmi={e.nmi:.3f}"
        print(f"gamma1={e.gamma.gamma1:.2f}  k={e.k_found}  q={e.q:.4f}{extra}")
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_ensemble(args) -> int:
    g, truth = _load(args)
    if not 0 <= args.tau <= 1:
        raise UsageError("--tau must lie in [0, 1]")
    if args.solutions:
        sols = SolutionSet.read(args.solutions, g, truth)
    else:
        sols = _sweep(args, g, truth)
    out = Path(args.out)
    if not args.solutions:
        sols.write(out)
    out.mkdir(parents=True, exist_ok=True)
    part, cm = run_specg_ec(g, sols, args.tau, _memetic(args), _p_spec(args),
                            return_consensus=True, min_k=args.min_k)
    write_membership(part, out / "ensemble.membership")
    if args.emit_consensus:
        cm.to_csv(out / "consensus.csv")
    line = f"k={part.k}  q={modularity(g, part):.4f}  sizes={cluster_sizes(part)}"
    if truth is not None:
        line += f"  nmi={nmi(part, truth):.3f}"
    print(line)
    return EXIT_OK


def cmd_eval(args) -> int:
    g = None
    if args.graph:
        g = load_edge_list(args.graph, index_base=args.index_base)
        n = g.n
    else:
        n = _count_vertices(args.pred)
    pred = load_membership(args.pred, n, index_base=args.index_base)
    truth = load_membership(args.truth, n, index_base=args.index_base)
    together, wrong = pair_agreement(pred, truth)
    print(f"nmi            {nmi(pred, truth):.6f}")
    print(f"pairs correct  {together}")
    print(f"pairs wrong    {wrong}")
    print(f"sizes pred     {cluster_sizes(pred)}")
    print(f"sizes truth    {cluster_sizes(truth)}")
    if g is not None:
        print(f"q              {modularity(g, pred):.6f}")
        print(f"q_in           {q_in(g, pred):.6f}")
        print(f"q_null         {q_null(g, pred):.6f}")
    return EXIT_OK


def _count_vertices(path) -> int:
    """Vertex count of a membership file: number of data lines."""
    count = 0
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            if raw.split("#", 1)[0].strip():
                count += 1
    if count == 0:
        raise GraphFormatError("empty membership file", path)
    return count


COMMANDS = {"run": cmd_run, "ensemble": cmd_ensemble, "eval": cmd_eval}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mospecg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"mospecg: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EigenSolverError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"mospecg: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
