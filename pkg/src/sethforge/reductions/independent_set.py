"""SAT to Independent Set: n+1 chained copies of variable paths plus ladder clause gadgets."""

from __future__ import annotations

from typing import Sequence

from sethforge.formula import Clause, CnfFormula, pad_to_even
from sethforge.graphcore import BagSweep, GraphBuilder
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, Solution
from sethforge.reductions.common import label, require_clauses

P = "IS"


def add_clause_gadget(gb: GraphBuilder, c: int, **tag) -> dict[str, list[int]]:
    """Ladder gadget for a clause of size ``c``; its maximum independent set has c + 2 vertices."""
    cp = [gb.vertex(label(P, "cp", **tag, k=k)) for k in range(1, c + 1)]
    cpp = [gb.vertex(label(P, "cpp", **tag, k=k)) for k in range(1, c + 1)]
    lits = [gb.vertex(label(P, "lit", **tag, k=k)) for k in range(1, c + 1)]
    start = gb.vertex(label(P, "start", **tag))
    end = gb.vertex(label(P, "end", **tag))
    gb.path(cp)
    gb.path(cpp)
    for k in range(c):
        gb.edge(cp[k], cpp[k])
        gb.edge(lits[k], cp[k])
        gb.edge(lits[k], cpp[k])
    gb.edge(start, cp[0])
    gb.edge(end, cp[-1])
    return {"cp": cp, "cpp": cpp, "lit": lits, "start": [start], "end": [end]}


def sweep_clause_gadget(sweep: BagSweep, gadget: dict[str, list[int]]):
    cp, cpp, lits = gadget["cp"], gadget["cpp"], gadget["lit"]
    sweep.add(gadget["start"][0], cp[0])
    sweep.drop(gadget["start"][0])
    for k in range(len(cp)):
        sweep.add(cpp[k])
        sweep.visit(lits[k])
        if k + 1 < len(cp):
            sweep.add(cp[k + 1])
            sweep.drop(cp[k])
            sweep.add(cpp[k + 1])
            sweep.drop(cpp[k])
    sweep.visit(gadget["end"][0])
    sweep.drop(cp[-1], cpp[-1])


def reduce_independent_set(phi: CnfFormula) -> Instance:
    require_clauses(phi)
    phi = pad_to_even(phi)
    n, m = phi.n, phi.m
    gb = GraphBuilder()
    # path[k][i][l]: copy k (0-based), variable i (1-based), position l (1-based)
    path: list[dict[int, dict[int, int]]] = []
    gadgets: list[list[dict[str, list[int]]]] = []
    for k in range(n + 1):
        copy_paths = {
            i: {l: gb.vertex(label(P, "path", copy=k + 1, i=i, pos=l)) for l in range(1, 2 * m + 1)}
            for i in range(1, n + 1)
        }
        for i in range(1, n + 1):
            gb.path([copy_paths[i][l] for l in range(1, 2 * m + 1)])
        copy_gadgets = []
        for j, clause in enumerate(phi.clauses, 1):
            gadget = add_clause_gadget(gb, clause.size, copy=k + 1, j=j)
            for lit_vertex, (v, pos) in zip(gadget["lit"], clause.literals):
                gb.edge(lit_vertex, copy_paths[v][2 * j if pos else 2 * j - 1])
            copy_gadgets.append(gadget)
        if k > 0:
            for i in range(1, n + 1):
                gb.edge(path[k - 1][i][2 * m], copy_paths[i][1])
        path.append(copy_paths)
        gadgets.append(copy_gadgets)
    graph = gb.build()

    sweep = BagSweep()
    sweep.add(*(path[0][i][1] for i in range(1, n + 1)))
    for k in range(n + 1):
        for j, clause in enumerate(phi.clauses, 1):
            positive = {v for v, pos in clause.literals if pos}
            negative = {v for v, pos in clause.literals if not pos}
            for i in sorted(positive):
                sweep.add(path[k][i][2 * j])
                if i not in negative:
                    sweep.drop(path[k][i][2 * j - 1])
            sweep_clause_gadget(sweep, gadgets[k][j - 1])
            for i in range(1, n + 1):
                sweep.add(path[k][i][2 * j])
                sweep.drop(path[k][i][2 * j - 1])
                if j < m:
                    nxt = path[k][i][2 * j + 1]
                elif k < n:
                    nxt = path[k + 1][i][1]
                else:
                    nxt = None
                if nxt is not None:
                    sweep.add(nxt)
                sweep.drop(path[k][i][2 * j])

    sizes = sum(c.size + 2 for c in phi.clauses)
    return Instance(
        kind=Kind.IndependentSet,
        graph=graph,
        target=(n + 1) * (m * n + sizes),
        sense=Sense.at_least,
        decomposition=sweep.decomposition(),
        claimed_width_bound=n + 4,
        meta=ReductionMeta(n=n, m=m),
    )


def gadget_choice(c: int, a: int) -> list[tuple[str, int]]:
    """A (c+2)-vertex independent set of the ladder using literal ``a`` (1-based) only."""
    chosen = [("lit", a), ("start", 0), ("end", 0)]
    for k in range(1, c + 1):
        if k < a:
            chosen.append(("cpp" if k % 2 else "cp", k))
        elif k > a:
            chosen.append(("cp" if k % 2 else "cpp", k))
    return chosen


def true_literal_index(clause: Clause, tau: Sequence[bool]) -> int:
    for a, (v, pos) in enumerate(clause.literals, 1):
        if tau[v - 1] == pos:
            return a
    raise ValueError("clause not satisfied")


def witness(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    padded = pad_to_even(phi)
    tau = tuple(tau) + (False,) * (padded.n - phi.n)
    n, m = padded.n, padded.m
    g = inst.graph
    chosen: set[int] = set()
    for k in range(1, n + 2):
        for i in range(1, n + 1):
            first = 1 if tau[i - 1] else 2
            for l in range(first, 2 * m + 1, 2):
                chosen.add(g.find(label(P, "path", copy=k, i=i, pos=l)))
        for j, clause in enumerate(padded.clauses, 1):
            a = true_literal_index(clause, tau)
            for role, idx in gadget_choice(clause.size, a):
                if role in ("start", "end"):
                    chosen.add(g.find(label(P, role, copy=k, j=j)))
                else:
                    chosen.add(g.find(label(P, role, copy=k, j=j, k=idx)))
    return Solution(vertices=frozenset(chosen))
