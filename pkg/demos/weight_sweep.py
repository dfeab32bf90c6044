"""How the partition changes as the intra-cluster weight grows.

At gamma1 = 0 only the null-model term counts and everything collapses into
one cluster; at gamma1 = 1 only internal edges count and the whole graph
is again one cluster.  The interesting partitions sit in between.
"""

import sys
import tempfile

from mospecg import MemeticParams, pareto_filter, run_mospecg
from mospecg.datasets import karate

g, truth = karate()
sols = run_mospecg(g, nf=11, memetic=MemeticParams(local_search_iters=5), truth=truth,
                   rng_seed=7, workers=2)

print("gamma1   k   Q_in    Q_null  Q       NMI")
for e in sols:
    print(f"{e.gamma.gamma1:5.2f}  {e.k_found:3d}  {e.q_in:.3f}  {e.q_null:.3f}  "
          f"{e.q:+.3f}  {e.nmi:.3f}")

front = pareto_filter(sols)
print(f"{len(front)} of {len(sols)} entries are non-dominated in (Q_in, Q_null)")

out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="sweep_")
print("written to", sols.write(out))
