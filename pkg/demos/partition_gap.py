"""Show why the clique padding does not turn packing into partition on the smallest instance."""

from sethforge.formula import CnfFormula
from sethforge.reductions import triangles
from sethforge.solvers import brute, dp

phi = CnfFormula.from_lists(2, [[1, -2]])
packing = triangles.reduce_triangle_packing(phi)
padded = triangles.to_partition(packing)
print("packing optimum", dp.solve(packing, witness=False).optimum, "target", packing.target)
print("partition feasible (dp)", dp.solve(padded, witness=False).optimum)

# the best packing of the padded graph leaves some vertices uncovered; list them
best = brute.max_triangle_packing(padded.graph)
covered = {v for t in best for v in t}
left = [padded.graph.labels[v] for v in range(padded.graph.num_vertices) if v not in covered]
print(f"max packing of padded graph covers {len(covered)} of {padded.graph.num_vertices}; uncovered:")
for lab in left:
    print("  ", lab)
