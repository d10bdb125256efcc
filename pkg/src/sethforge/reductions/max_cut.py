"""SAT to weighted Max Cut, and the expansion of weighted edges into 3-edge paths."""

from __future__ import annotations

from typing import Sequence

from sethforge.formula import CnfFormula
from sethforge.graphcore import BagSweep, GraphBuilder, Introduce, nicify
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, Solution
from sethforge.reductions.common import label, require_clauses
from sethforge.reductions.independent_set import true_literal_index

P = "MC"
PX = "MCX"


def literal_slot(k: int, positive: bool) -> int:
    """1-based path position of the first vertex touched by literal ``k`` (1-based)."""
    return 4 * k - 2 if positive else 4 * k - 3


def reduce_max_cut_weighted(phi: CnfFormula) -> Instance:
    require_clauses(phi)
    n = phi.n
    heavy = 3 * n
    gb = GraphBuilder()
    x0 = gb.vertex(label(P, "x0"))
    var = [gb.vertex(label(P, "var", i=i)) for i in range(1, n + 1)]
    paths = []
    for j, clause in enumerate(phi.clauses, 1):
        path = [gb.vertex(label(P, "clause", j=j, pos=l)) for l in range(1, 4 * clause.size + 1)]
        gb.path(path, heavy)
        gb.edge(x0, path[0], heavy)
        gb.edge(x0, path[-1], heavy)
        for k, (v, pos) in enumerate(clause.literals, 1):
            s = literal_slot(k, pos)
            gb.edge(var[v - 1], path[s - 1], 1)
            gb.edge(var[v - 1], path[s], 1)
        paths.append(path)
    graph = gb.build()

    sweep = BagSweep()
    sweep.add(x0, *var)
    for path in paths:
        sweep.add(path[0])
        for a, b in zip(path, path[1:]):
            sweep.add(b)
            sweep.drop(a)
        sweep.drop(path[-1])

    sizes = sum(c.size for c in phi.clauses)
    return Instance(
        kind=Kind.MaxCut,
        graph=graph,
        target=phi.m + (12 * n + 1) * sizes,
        sense=Sense.at_least,
        decomposition=sweep.decomposition(),
        claimed_width_bound=n + 5,
        meta=ReductionMeta(n=n, m=phi.m, W=graph.total_weight),
    )


def expand_to_unweighted(inst: Instance) -> Instance:
    """Replace each weight-w edge uv by w paths u-a-b-v; target becomes 2W + target."""
    g = inst.graph
    gb = GraphBuilder()
    for v in range(g.num_vertices):
        gb.vertex(g.labels[v] if g.labels else label(PX, "v", v=v))
    mids: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for (u, v), w in sorted(g.edges.items()):
        pairs = []
        for k in range(1, w + 1):
            a = gb.vertex(label(PX, "mid", u=u, v=v, k=k, pos=1))
            b = gb.vertex(label(PX, "mid", u=u, v=v, k=k, pos=2))
            gb.path([u, a, b, v])
            pairs.append((a, b))
        mids[(u, v)] = pairs
    graph = gb.build()

    sweep = BagSweep()
    for step in nicify(g, inst.decomposition).steps:
        if isinstance(step, Introduce):
            sweep.add(step.vertex)
            for u in sorted(step.neighbors):
                for a, b in mids[(min(u, step.vertex), max(u, step.vertex))]:
                    sweep.visit(a, b)
        else:
            sweep.drop(step.vertex)

    W = g.total_weight
    meta = inst.meta
    return Instance(
        kind=Kind.MaxCut,
        graph=graph,
        target=2 * W + inst.target,
        sense=Sense.at_least,
        decomposition=sweep.decomposition(),
        claimed_width_bound=inst.claimed_width_bound,
        meta=ReductionMeta(n=meta.n, m=meta.m, W=W),
    )


def witness_weighted(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    g = inst.graph
    side = [0] * g.num_vertices
    for i in range(1, phi.n + 1):
        side[g.find(label(P, "var", i=i))] = 1 if tau[i - 1] else 0
    for j, clause in enumerate(phi.clauses, 1):
        a = true_literal_index(clause, tau)
        s = literal_slot(a, clause.literals[a - 1][1])
        for l in range(1, 4 * clause.size + 1):
            side[g.find(label(P, "clause", j=j, pos=l))] = l % 2 if l <= s else (l - 1) % 2
    return Solution(sides=tuple(side))


def lift_cut(weighted: Sequence[int], expanded: Instance) -> tuple[int, ...]:
    """Extend a cut of the weighted graph to its expansion, crossing as many path edges as possible."""
    side = list(weighted) + [0] * (expanded.graph.num_vertices - len(weighted))
    for v in range(len(weighted), expanded.graph.num_vertices):
        fields = dict(f.split("=") for f in expanded.graph.labels[v].split(":")[2:])
        su = weighted[int(fields["u"])]
        side[v] = 1 - su if fields["pos"] == "1" else su
    return tuple(side)


def witness(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    """Witness for the unweighted expansion."""
    weighted = reduce_max_cut_weighted(phi)
    return Solution(sides=lift_cut(witness_weighted(weighted, phi, tau).sides, inst))
