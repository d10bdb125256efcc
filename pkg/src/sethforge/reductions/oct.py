"""SAT to Odd Cycle Transversal with arrows, good subsets and clause cycles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from sethforge.errors import DegenerateInput
from sethforge.formula import CnfFormula, VariableGrouping, group_assignment_satisfies, group_assignments, make_groups, restrict
from sethforge.graphcore import BagSweep, GraphBuilder
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, Solution
from sethforge.reductions.common import base_digits, check_codewords, code_str, label, parse_label, require_clauses

P = "OCT"
ARROW_ROLES = ("a1", "a2", "a3", "b1", "b2", "b3", "b4")


@dataclass
class Arrow:
    start: int
    end: int
    inner: dict[str, int]  # role -> vertex


def add_arrow(gb: GraphBuilder, u: int, v: int, **tag) -> Arrow:
    """Path u-a1-a2-a3-v with a triangle hung on each of its four edges."""
    inner = {role: gb.vertex(label(P, "arrow", **tag, part=role)) for role in ARROW_ROLES}
    a1, a2, a3 = inner["a1"], inner["a2"], inner["a3"]
    b1, b2, b3, b4 = inner["b1"], inner["b2"], inner["b3"], inner["b4"]
    gb.path([u, a1, a2, a3, v])
    gb.path([u, b1, a1, b2, a2, b3, a3, b4, v])
    return Arrow(u, v, inner)


def sweep_arrow(sweep: BagSweep, arrow: Arrow):
    """Endpoints must be live."""
    a1, a2, a3 = arrow.inner["a1"], arrow.inner["a2"], arrow.inner["a3"]
    sweep.add(a1)
    sweep.visit(arrow.inner["b1"])
    sweep.add(a2)
    sweep.visit(arrow.inner["b2"])
    sweep.drop(a1)
    sweep.add(a3)
    sweep.visit(arrow.inner["b3"])
    sweep.drop(a2)
    sweep.visit(arrow.inner["b4"])
    sweep.drop(a3)


def passive_cut(arrow: Arrow) -> set[int]:
    return {arrow.inner["a1"], arrow.inner["a3"]}


def active_cut(arrow: Arrow) -> set[int]:
    return {arrow.inner["a2"], arrow.end}


@dataclass
class Block:
    """Everything owned by one (group, block) pair."""

    path: list[list[int]]  # path[j] = the three path vertices of path j in this block
    triangles: list[tuple[int, int, int, int, int]]  # (a, b, q, left path vertex, right path vertex)
    left: list[int]
    right: list[int]
    x: list[int]  # per code rank
    xcycle: list[list[int]]  # per code rank, cycle starting at x
    x_arrows: list[list[Arrow]]  # per code rank
    y: list[int]
    y_arrows: list[Arrow]
    clause_arrows: dict[int, Arrow] = field(default_factory=dict)  # assignment rank -> arrow


@dataclass
class OctLayout:
    grouping: VariableGrouping
    p: int
    blocks: list[list[Block]]  # blocks[i][k]
    paths: list[list[list[int]]]  # paths[i][j][l], l 0-based
    clause_cycles: dict[tuple[int, int], list[int]]  # (h, r) -> cycle, dummies first
    cycle_vertex: dict[tuple[int, int, int, int], int]  # (h, r, i, rank) -> vertex
    counts: dict[str, int]
    mu: int


def codes(p: int) -> list[tuple[int, ...]]:
    return [base_digits(r, 3, p) for r in range(3**p)]


def num_blocks(m: int, t: int, p: int) -> int:
    return m * (t * p + 1)


def block_of_clause(h: int, r: int, m: int) -> int:
    """0-based block whose x vertices feed clause cycle (h, r); h is 1-based."""
    return r * m + h - 1


def build_oct(phi: CnfFormula, p: int = 1) -> tuple:
    require_clauses(phi)
    if p < 1:
        raise DegenerateInput("p must be at least 1")
    check_codewords(3, p)
    grouping = make_groups(phi.n, 3, p, "floor")
    t, m = grouping.num_groups, phi.m
    nb = num_blocks(m, t, p)
    length = 3 * nb
    cw = codes(p)
    gb = GraphBuilder()
    counts = {"triangles": 0, "path_triples": 0, "gadget_arrows": 0, "clause_arrows": 0, "x_choices": 0}

    paths = [
        [[gb.vertex(label(P, "path", i=i + 1, j=j + 1, l=l + 1)) for l in range(length)] for j in range(p)]
        for i in range(t)
    ]
    for i in range(t):
        for j in range(p):
            gb.path(paths[i][j])

    blocks: list[list[Block]] = []
    for i in range(t):
        row = []
        for k in range(nb):
            tag = {"i": i + 1, "k": k}
            path = [paths[i][j][3 * k : 3 * k + 3] for j in range(p)]
            counts["path_triples"] += p
            left = [gb.vertex(label(P, "left", **tag, s=s)) for s in range(5 * p)]
            right = [gb.vertex(label(P, "right", **tag, s=s)) for s in range(5 * p)]
            for u in left:
                for v in right:
                    gb.edge(u, v)
            triangles = []
            for j in range(p):
                for l in range(3 * k, 3 * k + 3):
                    if l + 1 >= length:
                        continue
                    a = gb.vertex(label(P, "tri", **tag, j=j + 1, l=l + 1, part="a"))
                    b = gb.vertex(label(P, "tri", **tag, j=j + 1, l=l + 1, part="b"))
                    q = gb.vertex(label(P, "tri", **tag, j=j + 1, l=l + 1, part="q"))
                    gb.clique([a, b, q])
                    gb.edge(a, paths[i][j][l])
                    gb.edge(b, paths[i][j][l + 1])
                    for u in left:
                        gb.edge(a, u)
                    for u in right:
                        gb.edge(b, u)
                    triangles.append((a, b, q, paths[i][j][l], paths[i][j][l + 1]))
                    counts["triangles"] += 1
            xs, xcycles, x_arrows = [], [], []
            for code in cw:
                s = code_str(code)
                x = gb.vertex(label(P, "x", **tag, S=s))
                rest = [gb.vertex(label(P, "xc", **tag, S=s, c=c)) for c in range(1, 2 * p + 1)]
                gb.cycle([x, *rest])
                sources = [path[j][pos] for j in range(p) for pos in range(3) if pos != code[j]]
                arrows = [add_arrow(gb, u, w, kind="px", **tag, S=s, c=c) for c, (u, w) in enumerate(zip(sources, rest), 1)]
                counts["gadget_arrows"] += len(arrows)
                xs.append(x)
                xcycles.append([x, *rest])
                x_arrows.append(arrows)
            y = [gb.vertex(label(P, "y", **tag, S=code_str(code))) for code in cw]
            gb.cycle(y)
            y_arrows = [add_arrow(gb, xs[r], y[r], kind="xy", **tag, S=code_str(cw[r])) for r in range(len(cw))]
            counts["gadget_arrows"] += len(y_arrows)
            counts["x_choices"] += 1
            row.append(Block(path, triangles, left, right, xs, xcycles, x_arrows, y, y_arrows))
        blocks.append(row)
    for i in range(t):
        for k in range(nb - 1):
            gb.edge(blocks[i][k].left[0], blocks[i][k + 1].right[0])

    clause_cycles = {}
    cycle_vertex = {}
    mu = 0
    for h in range(1, m + 1):
        clause = phi.clauses[h - 1]
        sat = [
            {ga.rank for ga in group_assignments(grouping, i) if group_assignment_satisfies(grouping, ga, clause)}
            for i in range(t)
        ]
        if not any(sat):
            raise DegenerateInput(f"clause {h} is satisfied by no group assignment")
        mu += sum(len(s) for s in sat)
        real = sum(1 << len(grouping.groups[i]) for i in range(t))
        dummies = 0
        while real + dummies < 3 or (real + dummies) % 2 == 0:
            dummies += 1
        for r in range(t * p + 1):
            cyc = [gb.vertex(label(P, "cc", h=h, r=r, dummy=d)) for d in range(dummies)]
            for i in range(t):
                for a in range(1 << len(grouping.groups[i])):
                    v = gb.vertex(label(P, "cc", h=h, r=r, i=i + 1, a=a))
                    cycle_vertex[(h, r, i, a)] = v
                    cyc.append(v)
            gb.cycle(cyc)
            clause_cycles[(h, r)] = cyc
            k = block_of_clause(h, r, m)
            for i in range(t):
                for a in sorted(sat[i]):
                    arrow = add_arrow(gb, blocks[i][k].x[a], cycle_vertex[(h, r, i, a)], kind="cl", h=h, r=r, i=i + 1, a=a)
                    blocks[i][k].clause_arrows[a] = arrow
                    counts["clause_arrows"] += 1
    graph = gb.build()
    layout = OctLayout(grouping, p, blocks, paths, clause_cycles, cycle_vertex, counts, mu)
    return graph, layout


def _sweep(layout: OctLayout, m: int) -> BagSweep:
    t = layout.grouping.num_groups
    p = layout.p
    nb = len(layout.blocks[0])
    sweep = BagSweep()
    sweep.add(*(layout.blocks[i][0].path[j][0] for i in range(t) for j in range(p)))
    sweep.add(*(layout.blocks[i][0].right[0] for i in range(t)))
    for k in range(nb):
        h, r = k % m + 1, k // m
        cyc = layout.clause_cycles[(h, r)]
        anchor = cyc[0]
        sweep.add(anchor)
        cursor = anchor
        for i in range(t):
            blk = layout.blocks[i][k]
            sweep.add(*(v for row in blk.path for v in row[1:]))
            sweep.add(blk.y[0])
            for rank, x in enumerate(blk.x):
                sweep.add(x)
                ring = blk.xcycle[rank]
                for c, arrow in enumerate(blk.x_arrows[rank], 1):
                    sweep.add(ring[c])
                    if c > 1:
                        sweep.drop(ring[c - 1])
                    sweep_arrow(sweep, arrow)
                sweep.drop(ring[-1])
                if rank > 0:
                    sweep.add(blk.y[rank])
                    if rank > 1:
                        sweep.drop(blk.y[rank - 1])
                sweep_arrow(sweep, blk.y_arrows[rank])
                v = layout.cycle_vertex.get((h, r, i, rank))
                if v is not None:
                    if v != cursor:
                        sweep.add(v)
                        if cursor != anchor:
                            sweep.drop(cursor)
                        cursor = v
                    if rank in blk.clause_arrows:
                        sweep_arrow(sweep, blk.clause_arrows[rank])
                sweep.drop(x)
            sweep.drop(blk.y[-1], blk.y[0])
            sweep.add(*blk.left, *blk.right)
            last = k + 1 == nb
            for a, b, q, lv, rv in blk.triangles:
                if rv not in sweep.live:
                    sweep.add(rv)
                sweep.add(a, b)
                sweep.visit(q)
                sweep.drop(a, b)
                sweep.drop(lv)
            if not last:
                sweep.add(layout.blocks[i][k + 1].right[0])
            sweep.drop(*blk.left, *blk.right)
            if last:
                sweep.drop(*(v for row in blk.path for v in row))
        sweep.drop(*cyc)
    return sweep


def reduce_oct(phi: CnfFormula, p: int = 1) -> Instance:
    graph, layout = build_oct(phi, p)
    t = layout.grouping.num_groups
    counts = layout.counts
    items = {
        "triangles": counts["triangles"],
        "path_triples": counts["path_triples"],
        "gadget_arrows": 2 * counts["gadget_arrows"],
        "clause_arrows": 2 * counts["clause_arrows"],
        "x_choices": counts["x_choices"],
    }
    return Instance(
        kind=Kind.OddCycleTransversal,
        graph=graph,
        target=sum(items.values()),
        sense=Sense.at_most,
        decomposition=_sweep(layout, phi.m).decomposition(),
        claimed_width_bound=t * (p + 1) + 10 * p * 3**p,
        meta=ReductionMeta(
            n=phi.n,
            m=phi.m,
            p=p,
            t=t,
            beta=layout.grouping.group_size,
            budget_items=items,
            mu=layout.mu,
            arrow_count=counts["gadget_arrows"] + counts["clause_arrows"],
        ),
    )


def lower_bound_pieces(g) -> list[list[int]]:
    """Disjoint vertex groups whose separate optima add up to the budget on satisfiable inputs.

    One block core (path triple, triangles, bicliques), one piece per arrow
    into an X cycle or a clause cycle (arrow plus its end), and one piece per
    Y cycle with its arrows and x vertices. Grouping is read off the labels.
    """
    groups: dict[tuple, list[int]] = {}
    for v, text in enumerate(g.labels):
        prefix, role, f = parse_label(text)
        if prefix != P:
            key = ("other", v)
        elif role == "path":
            key = ("core", f["i"], (int(f["l"]) - 1) // 3)
        elif role in ("left", "right", "tri"):
            key = ("core", f["i"], int(f["k"]))
        elif role in ("x", "y") or (role == "arrow" and f["kind"] == "xy"):
            key = ("y", f["i"], int(f["k"]))
        elif role == "xc" or (role == "arrow" and f["kind"] == "px"):
            key = ("px", f["i"], int(f["k"]), f["S"], f["c"])
        elif role == "cc" and "dummy" in f:
            key = ("dummy", f["h"], f["r"], f["dummy"])
        elif role == "cc" or (role == "arrow" and f["kind"] == "cl"):
            key = ("cl", f["h"], f["r"], f["i"], f["a"])
        else:
            key = ("other", v)
        groups.setdefault(key, []).append(v)
    return list(groups.values())


def closed_form_arrow_count(m: int, t: int, p: int, mu: int) -> int:
    """Arrow total as the budget paragraph states it; compared against the constructed count in diagnostics."""
    return m * mu + (2 * p + 1) * 3**p * t * m * (t * p + 1)


def witness(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    _, layout = build_oct(phi, inst.meta.p)
    t = layout.grouping.num_groups
    cw = codes(layout.p)
    chosen: set[int] = set()
    for i in range(t):
        rank = restrict(layout.grouping, tau, i).rank
        code = cw[rank]
        picked = {blk.path[j][code[j]] for blk in layout.blocks[i] for j in range(layout.p)}
        chosen |= picked
        for blk in layout.blocks[i]:
            for a, b, q, lv, rv in blk.triangles:
                if lv in picked:
                    chosen.add(b)
                elif rv in picked:
                    chosen.add(a)
                else:
                    chosen.add(q)
            for arrows in blk.x_arrows:
                for arrow in arrows:
                    chosen |= active_cut(arrow) if arrow.start in picked else passive_cut(arrow)
            chosen.add(blk.x[rank])
            for r, arrow in enumerate(blk.y_arrows):
                chosen |= active_cut(arrow) if r == rank else passive_cut(arrow)
            for a, arrow in blk.clause_arrows.items():
                chosen |= active_cut(arrow) if a == rank else passive_cut(arrow)
    return Solution(vertices=frozenset(chosen))
