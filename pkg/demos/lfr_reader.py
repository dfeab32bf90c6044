"""Reading LFR-style input.

LFR's network.dat lists every edge in both directions and numbers vertices
from 1; community.dat maps each vertex to its community.  No LFR generator
is assumed here: a planted partition is written in the same format and read
back through the same path the CLI's ``--lfr`` flag uses.
"""

import tempfile
from pathlib import Path

import numpy as np

from mospecg import load_edge_list, load_membership, nmi, specg_ec

rng = np.random.default_rng(0)
sizes = [30, 25, 20, 25]
labels = np.repeat(np.arange(len(sizes)), sizes)
n = labels.size
mu = 0.2  # fraction of each vertex's edges leaving its community, roughly
p_in, p_out = 0.3, 0.3 * mu / (1 - mu) * np.mean(sizes) / (n - np.mean(sizes))
edges = [(i, j) for i in range(n) for j in range(i + 1, n)
         if rng.random() < (p_in if labels[i] == labels[j] else p_out)]

folder = Path(tempfile.mkdtemp(prefix="lfr_"))
with open(folder / "network.dat", "w") as fh:
    for i, j in edges:
        fh.write(f"{i + 1}\t{j + 1}\n{j + 1}\t{i + 1}\n")
with open(folder / "community.dat", "w") as fh:
    for v, c in enumerate(labels):
        fh.write(f"{v + 1}\t{c + 1}\n")

g = load_edge_list(folder / "network.dat", index_base="one", symmetric_duplicates=True)
truth = load_membership(folder / "community.dat", g.n, index_base="one")
print(f"{folder}: n={g.n} m={g.m}, {truth.k} planted communities")

part, _ = specg_ec(g, rng_seed=0)
print(f"ensemble found {part.k} clusters, NMI {nmi(part, truth):.3f}")
print(f"try: mospecg ensemble --lfr --index-base one --graph {folder}/network.dat "
      f"--truth {folder}/community.dat --out {folder}/out")
