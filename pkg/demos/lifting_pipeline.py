"""Grow a facet: start from a degree row on a small digraph, clone a node,
then push the result to the cycle polytope, checking each step by rank."""
from pathpoly import families as fam
from pathpoly import lab
from pathpoly.core import Digraph
from pathpoly.lifting import clone_node_lift, lift_to_cycle

d, p = Digraph(5), 4
row = fam.gen_degree(d, 1)  # x(out(1)) <= 1
print("start    n=5:", row)
print("  facet?", lab.check_facet(row, d, p).is_facet)

# clone node 2; the clone gets label 5 and the terminus moves to 6
cloned, big = clone_node_lift(row, d, p, 2)
rep = lab.check_facet(cloned, big, p)
print("cloned   n=6:", cloned)
print("  tight paths", rep.tight_count, "spanning", rep.tight_affine_dim, "of", rep.polytope_dim)

# once more, on the new digraph
cloned2, bigger = clone_node_lift(cloned, big, p, 3)
print("cloned   n=7:", cloned2, "->", lab.check_facet(cloned2, bigger, p).is_facet)

# merge 0 and n: the same row on the p-cycle polytope
cyc, dn = lift_to_cycle(cloned, big, p)
crep = lab.check_cycle_facet(cyc, dn, p)
print("cycle    K_6:", cyc)
print("  facet of the cycle polytope?", crep.is_facet)
