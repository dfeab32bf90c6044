"""Benchmark networks with known community structure.

Karate ships with the package.  Other networks are looked up by name in
the directory given by ``MOSPECG_DATA`` (files ``<name>.txt`` and
``<name>.cmty``), then in the package's own data directory.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .graph import Graph, load_edge_list, load_membership
from .partition import Partition

__all__ = ["DatasetNotFound", "dolphins", "karate", "load", "locate"]

DATA_ENV = "MOSPECG_DATA"


class DatasetNotFound(FileNotFoundError):
    pass


def _candidates(name):
    env = os.environ.get(DATA_ENV)
    if env:
        yield Path(env)
    yield Path(str(resources.files("mospecg") / "data"))


def locate(name: str) -> tuple[Path, Path]:
    """Paths of ``<name>.txt`` and ``<name>.cmty``."""
    for folder in _candidates(name):
        graph, truth = folder / f"{name}.txt", folder / f"{name}.cmty"
        if graph.is_file() and truth.is_file():
            return graph, truth
    where = f"${DATA_ENV} or the package data directory"
    raise DatasetNotFound(f"no {name}.txt / {name}.cmty pair found in {where}")


def load(name: str) -> tuple[Graph, Partition]:
    graph_path, truth_path = locate(name)
    g = load_edge_list(graph_path)
    return g, load_membership(truth_path, g.n)


def karate() -> tuple[Graph, Partition]:
    """Zachary's karate club (34 vertices, 78 edges) and its 16/18 split."""
    return load("karate")


def dolphins() -> tuple[Graph, Partition]:
    """Lusseau's dolphin network (62 vertices, 159 edges) and its 42/20 split.

    Not bundled; place ``dolphins.txt`` and ``dolphins.cmty`` in ``$MOSPECG_DATA``.
    """
    return load("dolphins")
