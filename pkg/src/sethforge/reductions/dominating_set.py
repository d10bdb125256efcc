"""SAT to Dominating Set with base-3 group gadgets."""

from __future__ import annotations

from typing import Sequence

from sethforge.errors import DegenerateInput
from sethforge.formula import CnfFormula, make_groups, restrict, satisfying_group_assignments
from sethforge.graphcore import BagSweep, GraphBuilder
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, Solution
from sethforge.reductions.common import base_digits, check_codewords, code_str, label, require_clauses

P = "DS"


def subset_codes(p: int) -> list[tuple[int, ...]]:
    """All one-vertex-per-path selections, in rank order (digit = 0-based position on path)."""
    return [base_digits(r, 3, p) for r in range(3**p)]


def gadget_size(p: int) -> int:
    return 3 * p + 2 * p + 2 * 3**p + 1


def add_group_gadget(gb: GraphBuilder, p: int, **tag) -> dict:
    paths = [[gb.vertex(label(P, "path", **tag, l=l, pos=pos)) for pos in (1, 2, 3)] for l in range(1, p + 1)]
    guards = []
    for l, path in enumerate(paths, 1):
        gb.path(path)
        for role in ("guard", "guardp"):
            g = gb.vertex(label(P, role, **tag, l=l))
            guards.append(g)
            for u in path:
                gb.edge(g, u)
    xs, xps = {}, {}
    for code in subset_codes(p):
        x = gb.vertex(label(P, "x", **tag, S=code_str(code)))
        xp = gb.vertex(label(P, "xp", **tag, S=code_str(code)))
        for l, path in enumerate(paths):
            for pos, u in enumerate(path):
                if pos != code[l]:
                    gb.edge(x, u)
        gb.edge(x, xp)
        xs[code], xps[code] = x, xp
    gb.clique(list(xps.values()))
    guard_x = gb.vertex(label(P, "guardx", **tag))
    for xp in xps.values():
        gb.edge(guard_x, xp)
    return {"paths": paths, "guards": guards, "x": xs, "xp": xps, "guardx": guard_x}


def reduce_dominating_set(phi: CnfFormula, p: int = 1) -> Instance:
    require_clauses(phi)
    if p < 1:
        raise DegenerateInput("p must be at least 1")
    check_codewords(3, p)
    grouping = make_groups(phi.n, 3, p, "floor")
    t, m = grouping.num_groups, phi.m
    copies = m * (2 * p * t + 1)
    codes = subset_codes(p)
    gb = GraphBuilder()
    h = gb.vertex(label(P, "h"))
    hp = gb.vertex(label(P, "hp"))
    gb.edge(h, hp)
    gadgets = [[add_group_gadget(gb, p, g=i + 1, b=b) for b in range(1, copies + 1)] for i in range(t)]
    for i in range(t):
        for b in range(copies - 1):
            for l in range(p):
                gb.edge(gadgets[i][b]["paths"][l][2], gadgets[i][b + 1]["paths"][l][0])
        for l in range(p):
            gb.edge(h, gadgets[i][0]["paths"][l][0])
            gb.edge(h, gadgets[i][copies - 1]["paths"][l][2])
    clause_vertex = {}
    for j in range(1, m + 1):
        sat = [satisfying_group_assignments(phi, grouping, i, j - 1) for i in range(t)]
        for ell in range(2 * p * t + 1):
            c = gb.vertex(label(P, "clause", j=j, copy=ell))
            clause_vertex[(j, ell)] = c
            for i in range(t):
                for ga in sat[i]:
                    gb.edge(c, gadgets[i][m * ell + j - 1]["xp"][codes[ga.rank]])
    graph = gb.build()

    sweep = BagSweep()
    sweep.add(h)
    sweep.visit(hp)
    sweep.add(*(gadgets[i][0]["paths"][l][0] for i in range(t) for l in range(p)))
    for b in range(copies):
        j, ell = b % m + 1, b // m
        sweep.add(clause_vertex[(j, ell)])
        for i in range(t):
            gad = gadgets[i][b]
            for path in gad["paths"]:
                sweep.add(path[1], path[2])
            for guard in gad["guards"]:
                sweep.visit(guard)
            for code in codes:
                sweep.add(gad["x"][code], gad["xp"][code])
                sweep.drop(gad["x"][code])
            sweep.visit(gad["guardx"])
            sweep.drop(*(path[k] for path in gad["paths"] for k in (0, 1)))
            sweep.drop(*gad["xp"].values())
            for l, path in enumerate(gad["paths"]):
                if b + 1 < copies:
                    sweep.add(gadgets[i][b + 1]["paths"][l][0])
                sweep.drop(path[2])
        sweep.drop(clause_vertex[(j, ell)])

    return Instance(
        kind=Kind.DominatingSet,
        graph=graph,
        target=(p + 1) * t * copies + 1,
        sense=Sense.at_most,
        decomposition=sweep.decomposition(),
        claimed_width_bound=t * p + gadget_size(p) + 2,
        meta=ReductionMeta(n=phi.n, m=m, p=p, t=t, beta=grouping.group_size),
    )


def witness(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    p = inst.meta.p
    grouping = make_groups(phi.n, 3, p, "floor")
    t, m = grouping.num_groups, phi.m
    copies = m * (2 * p * t + 1)
    codes = subset_codes(p)
    g = inst.graph
    chosen = {g.find(label(P, "h"))}
    for i in range(t):
        code = codes[restrict(grouping, tau, i).rank]
        for b in range(1, copies + 1):
            for l in range(1, p + 1):
                chosen.add(g.find(label(P, "path", g=i + 1, b=b, l=l, pos=code[l - 1] + 1)))
            chosen.add(g.find(label(P, "xp", g=i + 1, b=b, S=code_str(code))))
    return Solution(vertices=frozenset(chosen))
