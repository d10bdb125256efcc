"""SAT to Triangle Packing, and the clique padding towards Partition into Triangles."""

from __future__ import annotations

from typing import Sequence

from sethforge.formula import CnfFormula
from sethforge.graphcore import BagSweep, GraphBuilder
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, Solution
from sethforge.reductions.common import label, require_clauses
from sethforge.reductions.independent_set import true_literal_index

P = "TP"


def fan_slot(j: int, r: int, m: int, positive: bool) -> int:
    """Position of the fan vertex that clause ``j`` (1-based) touches in copy ``r``."""
    l = m * r + j
    return 2 * l if positive else 2 * l - 1


def reduce_triangle_packing(phi: CnfFormula) -> Instance:
    require_clauses(phi)
    n, m = phi.n, phi.m
    length = 2 * m * (n + 1)
    gb = GraphBuilder()
    path = [[gb.vertex(label(P, "p", i=i, l=l)) for l in range(1, length + 2)] for i in range(1, n + 1)]
    fan = [[gb.vertex(label(P, "t", i=i, l=l)) for l in range(1, length + 1)] for i in range(1, n + 1)]
    for i in range(n):
        gb.path(path[i])
        for l in range(length):
            gb.edge(fan[i][l], path[i][l])
            gb.edge(fan[i][l], path[i][l + 1])
    pairs = {}
    for r in range(n + 1):
        for j, clause in enumerate(phi.clauses, 1):
            c = gb.vertex(label(P, "c", j=j, r=r))
            d = gb.vertex(label(P, "d", j=j, r=r))
            gb.edge(c, d)
            for v, pos in clause.literals:
                t = fan[v - 1][fan_slot(j, r, m, pos) - 1]
                gb.edge(c, t)
                gb.edge(d, t)
            pairs[m * r + j] = (c, d)
    graph = gb.build()

    sweep = BagSweep()
    sweep.add(*(path[i][0] for i in range(n)))
    for l in range(1, m * (n + 1) + 1):
        c, d = pairs[l]
        sweep.add(c, d)
        for i in range(n):
            _sweep_stage(sweep, path[i], fan[i], l)
        sweep.drop(c, d)
    sweep.drop(*(path[i][-1] for i in range(n)))

    return Instance(
        kind=Kind.TrianglePacking,
        graph=graph,
        target=m * n * (n + 1) + m * (n + 1),
        sense=Sense.at_least,
        decomposition=sweep.decomposition(),
        claimed_width_bound=n + 10,
        meta=ReductionMeta(n=n, m=m),
    )


def _sweep_stage(sweep: BagSweep, path, fan, l: int):
    """Move past positions 2l-1 and 2l of one variable path."""
    _sweep_stage_fans(sweep, path[2 * l - 2 : 2 * l + 1], fan[2 * l - 2 : 2 * l])


def _sweep_stage_fans(sweep: BagSweep, three, two):
    a, b, c = three
    sweep.add(b)
    sweep.visit(two[0])
    sweep.drop(a)
    sweep.add(c)
    sweep.visit(two[1])
    sweep.drop(b)


def to_partition(inst: Instance) -> Instance:
    """Pad every fan pair with a 4-clique chained across variables (experimental, see the ledger)."""
    g = inst.graph
    n, m = inst.meta.n, inst.meta.m
    rounds = m * (n + 1)
    short = (2 * n + 2) % 3
    gb = GraphBuilder()
    for v in range(g.num_vertices):
        gb.vertex(g.labels[v] if g.labels else label(P, "v", v=v))
    for (u, v), w in g.edges.items():
        gb.edge(u, v, w)
    cliques = {}
    for l in range(1, rounds + 1):
        for i in range(1, n + 1):
            size = 4 - short if i == n else 4
            q = [gb.vertex(label(P, "Q", i=i, l=l, k=k)) for k in range(1, size + 1)]
            gb.clique(q)
            for t in (g.find(label(P, "t", i=i, l=2 * l - 1)), g.find(label(P, "t", i=i, l=2 * l))):
                for v in q:
                    gb.edge(v, t)
            if i > 1:
                for u in cliques[(i - 1, l)]:
                    for v in q:
                        gb.edge(u, v)
            cliques[(i, l)] = q
    graph = gb.build()

    def find(role, **f):
        return g.find(label(P, role, **f))

    sweep = BagSweep()
    sweep.add(*(find("p", i=i, l=1) for i in range(1, n + 1)))
    for l in range(1, rounds + 1):
        j, r = (l - 1) % m + 1, (l - 1) // m
        pair = (find("c", j=j, r=r), find("d", j=j, r=r))
        sweep.add(*pair)
        sweep.add(*cliques[(1, l)])
        for i in range(1, n + 1):
            a, b, c = (find("p", i=i, l=x) for x in (2 * l - 1, 2 * l, 2 * l + 1))
            t1, t2 = find("t", i=i, l=2 * l - 1), find("t", i=i, l=2 * l)
            _sweep_stage_fans(sweep, (a, b, c), (t1, t2))
            if i < n:
                sweep.add(*cliques[(i + 1, l)])
            sweep.drop(*cliques[(i, l)])
        sweep.drop(*pair)
    sweep.drop(*(find("p", i=i, l=2 * rounds + 1) for i in range(1, n + 1)))

    return Instance(
        kind=Kind.PartitionIntoTriangles,
        graph=graph,
        target=None,
        sense=Sense.feasible,
        decomposition=sweep.decomposition(),
        claimed_width_bound=n + 10,
        meta=inst.meta,
        experimental=True,
    )


def witness(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    """Every second fan triangle per variable, chosen by its value, plus one triangle per clause copy."""
    g = inst.graph
    n, m = phi.n, phi.m
    triangles = []

    def find(role, **f):
        return g.find(label(P, role, **f))

    for i in range(1, n + 1):
        for l in range(1, m * (n + 1) + 1):
            x = 2 * l - 1 if tau[i - 1] else 2 * l
            triangles.append((find("t", i=i, l=x), find("p", i=i, l=x), find("p", i=i, l=x + 1)))
    for r in range(n + 1):
        for j, clause in enumerate(phi.clauses, 1):
            v, pos = clause.literals[true_literal_index(clause, tau) - 1]
            t = find("t", i=v, l=fan_slot(j, r, m, pos))
            triangles.append((find("c", j=j, r=r), find("d", j=j, r=r), t))
    return Solution(triangles=tuple(sorted(tuple(sorted(tri)) for tri in triangles)))

