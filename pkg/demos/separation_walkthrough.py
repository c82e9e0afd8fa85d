"""What each separation routine sees on a handful of fractional points."""
from fractions import Fraction as F

from pathpoly.core import Digraph
from pathpoly.enumeration import seq_arcs
from pathpoly.separation import (FractionalPoint, separate_all, separate_card_path,
                                 separate_one_sided_min_cut, separate_partition_families)


def show(title, res, limit=4):
    print(f"-- {title}: {len(res)} violated")
    for q, v in res.found[:limit]:
        print(f"   {v}  {q.family} {dict(q.params)}")


# a path plus a disjoint 2-cycle: four arcs, flow rows hold
d = Digraph(6)
x = FractionalPoint.from_arcs(d, seq_arcs((0, 1, 6))) + FractionalPoint.from_arcs(d, [(2, 3), (3, 2)])
print("violated equations:", x.violated_equations(4))
show("max-flow", separate_one_sided_min_cut(x))

# two half paths: a genuine point of the polytope, so nothing should fire
y = FractionalPoint.from_arcs(d, seq_arcs((0, 1, 2, 3, 6)), F(1, 2)) + \
    FractionalPoint.from_arcs(d, seq_arcs((0, 4, 5, 2, 6)), F(1, 2))
show("half-half", separate_all(y, 4))

# a long walk that keeps crossing from S={0,1,2} to T={3,4,5}
d5 = Digraph(5)
z = FractionalPoint.from_arcs(d5, seq_arcs((0, 3, 1, 4, 2, 5)), F(2, 3)) + \
    FractionalPoint.from_arcs(d5, seq_arcs((0, 3, 5)), F(1, 3))
show("partition (local search)", separate_partition_families(z, 4, seed=0, exhaustive=False))
show("partition (full sweep)", separate_partition_families(z, 4, exhaustive=True))

# weight on both directions of an internal path with little indegree
w = FractionalPoint(d, {(1, 2): F(1, 2), (2, 3): F(1, 2), (3, 4): F(1, 2)})
show("card-path", separate_card_path(w, 4), limit=3)
