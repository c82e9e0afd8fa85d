"""Solve a few random hop-constrained shortest path instances and compare
with brute-force enumeration.  The cut counts show which rows did the work."""
import random
import time

from pathpoly.core import Digraph, Instance
from pathpoly.enumeration import min_cost_path
from pathpoly.solver import SolverConfig, solve

rng = random.Random(7)
for n, p in [(6, 4), (7, 4), (7, 5), (8, 4), (8, 6)]:
    d = Digraph(n)
    inst = Instance(d, p, {a: rng.randint(-10, 10) for a in d.arcs})
    t0 = time.perf_counter()
    rep = solve(inst, SolverConfig(seed=1))
    dt = time.perf_counter() - t0
    opt = min_cost_path(d, inst.costs, p)
    cuts = ", ".join(f"{k}={v}" for k, v in sorted(rep.cuts_added.items()))
    print(f"n={n} p={p}: value {rep.value} (oracle {opt.value}), path {rep.sequence}, "
          f"{rep.nodes_explored} nodes, {dt:.2f}s")
    print(f"    root bounds {[str(b) for b in rep.root_bounds[:6]]}{' ...' if len(rep.root_bounds) > 6 else ''}")
    print(f"    cuts: {cuts or 'none'}")

# costs that reward a 2-cycle: the LP happily takes it until a cut steps in
d = Digraph(6)
costs = {a: 5 for a in d.arcs}
costs.update({(2, 3): -8, (3, 2): -8, (0, 1): 0, (1, 6): 0})
rep = solve(Instance(d, 4, costs))
print()
print("\n".join(rep.lines()))
