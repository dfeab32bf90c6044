"""Bi-objective spectral memetic graph clustering and its consensus ensemble."""

from .ensemble import (ConsensusMatrix, adjusted_graph, build_consensus,
                       consensus_from_partitions, run_specg_ec, specg_ec)
from .graph import (Graph, GraphFormatError, load_edge_list, load_membership,
                    write_edge_list, write_membership)
from .memetic import Individual, MemeticParams, evolve
from .metrics import cluster_sizes, modularity, nmi, pair_agreement, q_in, q_null
from .partition import Partition
from .spectral import (ClusterVectors, EigenSolverError, GammaPair, SpectralContext,
                       best_target, build_bw, eigen_top_abs, estimate_k, make_context,
                       move_gain, qw_exact, qw_spectral)
from .sweep import SolutionEntry, SolutionSet, gamma_grid, pareto_filter, run_mospecg

__all__ = [
    "ClusterVectors", "ConsensusMatrix", "EigenSolverError", "GammaPair", "Graph",
    "GraphFormatError", "Individual", "MemeticParams", "Partition", "SolutionEntry",
    "SolutionSet", "SpectralContext", "adjusted_graph", "best_target", "build_bw",
    "build_consensus", "cluster_sizes", "consensus_from_partitions", "eigen_top_abs",
    "estimate_k", "evolve", "gamma_grid", "load_edge_list", "load_membership",
    "make_context", "modularity", "move_gain", "nmi", "pair_agreement", "pareto_filter",
    "q_in", "q_null", "qw_exact", "qw_spectral", "run_mospecg", "run_specg_ec",
    "specg_ec", "write_edge_list", "write_membership",
]

__version__ = "0.1.0"
