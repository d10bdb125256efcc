"""SAT to q-List-Colouring via connectors, and list removal by clique completion."""

from __future__ import annotations

from typing import Sequence

from sethforge.errors import DegenerateInput
from sethforge.formula import CnfFormula, make_groups, restrict, satisfying_group_assignments
from sethforge.graphcore import GraphBuilder, BagSweep, PathDecomposition
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, Solution
from sethforge.reductions.common import base_digits, check_codewords, label, require_clauses

P = "COL"
RED, WHITE, BLACK = 1, 2, 3


def group_coloring(rank: int, q: int, p: int) -> tuple[int, ...]:
    """Colours of the p group vertices encoding a group assignment of the given rank."""
    return tuple(d + 1 for d in base_digits(rank, q, p))


def end_color(path_len: int) -> int:
    """The end list makes a pure white/black alternation of the path improper."""
    return WHITE if path_len % 2 == 0 else BLACK


def add_connector(gb: GraphBuilder, lists: dict, v: int, group: Sequence[int], mu: Sequence[int], q: int, **tag) -> list[dict]:
    """Wire path vertex ``v`` to group vertices so that ``v`` can only be red under colouring ``mu``."""
    parts = []
    full = frozenset(range(1, q + 1))
    for l, (u, good) in enumerate(zip(group, mu), 1):
        for x in range(1, q + 1):
            if x == good:
                continue
            hub = gb.vertex(label(P, "hub", **tag, l=l, x=x))
            lists[hub] = full
            gb.edge(hub, v)
            arms = []
            for y in range(2, q + 1):
                near = gb.vertex(label(P, "w", **tag, l=l, x=x, y=y))
                gb.edge(near, u)
                if x == RED:
                    lists[near] = frozenset({RED, y})
                    gb.edge(near, hub)
                    arms.append((near, None))
                else:
                    far = gb.vertex(label(P, "wp", **tag, l=l, x=x, y=y))
                    lists[near] = frozenset({x, RED})
                    lists[far] = frozenset({y, RED})
                    gb.edge(near, far)
                    gb.edge(far, hub)
                    arms.append((near, far))
            parts.append({"l": l, "x": x, "group_vertex": u, "hub": hub, "arms": arms})
    return parts


def sweep_connector(sweep: BagSweep, parts: list[dict]):
    for part in parts:
        sweep.add(part["hub"])
        for near, far in part["arms"]:
            if far is None:
                sweep.visit(near)
            else:
                sweep.add(far)
                sweep.visit(near)
                sweep.drop(far)
        sweep.drop(part["hub"])


def reduce_q_coloring(phi: CnfFormula, q: int = 3, p: int = 1) -> Instance:
    require_clauses(phi)
    if q < 3:
        raise DegenerateInput("q must be at least 3")
    if p < 1:
        raise DegenerateInput("p must be at least 1")
    check_codewords(q, p)
    grouping = make_groups(phi.n, q, p, "floor")
    t = grouping.num_groups
    full = frozenset(range(1, q + 1))
    gb = GraphBuilder()
    lists: dict[int, frozenset[int]] = {}
    groups = []
    for i in range(1, t + 1):
        vs = [gb.vertex(label(P, "group", i=i, l=l)) for l in range(1, p + 1)]
        for v in vs:
            lists[v] = full
        groups.append(vs)
    clauses = []
    for j in range(1, phi.m + 1):
        start = gb.vertex(label(P, "start", j=j))
        lists[start] = frozenset({WHITE})
        path = []
        connectors = []
        for i in range(t):
            for ga in satisfying_group_assignments(phi, grouping, i, j - 1):
                v = gb.vertex(label(P, "path", j=j, i=i + 1, a=ga.rank))
                lists[v] = frozenset({RED, WHITE, BLACK})
                mu = group_coloring(ga.rank, q, p)
                connectors.append(add_connector(gb, lists, v, groups[i], mu, q, j=j, i=i + 1, a=ga.rank))
                path.append(v)
        if not path:
            raise DegenerateInput(f"clause {j} is satisfied by no group assignment")
        end = gb.vertex(label(P, "end", j=j))
        lists[end] = frozenset({end_color(len(path))})
        gb.path([start, *path, end])
        clauses.append((start, path, end, connectors))
    graph = gb.build()

    sweep = BagSweep()
    sweep.add(*(v for vs in groups for v in vs))
    for start, path, end, connectors in clauses:
        sweep.add(start, path[0])
        sweep.drop(start)
        for k, v in enumerate(path):
            sweep_connector(sweep, connectors[k])
            nxt = path[k + 1] if k + 1 < len(path) else end
            sweep.add(nxt)
            sweep.drop(v)
        sweep.drop(end)

    return Instance(
        kind=Kind.QListColoring,
        graph=graph,
        target=None,
        sense=Sense.feasible,
        decomposition=sweep.decomposition(),
        claimed_width_bound=p * t + 4,
        meta=ReductionMeta(n=phi.n, m=phi.m, p=p, q=q, t=t, beta=grouping.group_size),
        lists=lists,
    )


def complete_lists_to_plain(inst: Instance) -> Instance:
    """Add a q-clique whose i-th vertex is joined to every vertex lacking colour i in its list."""
    q = inst.meta.q
    g = inst.graph
    gb = GraphBuilder()
    for v in range(g.num_vertices):
        gb.vertex(g.labels[v] if g.labels else label(P, "v", v=v))
    for (u, v), w in g.edges.items():
        gb.edge(u, v, w)
    clique = [gb.vertex(label(P, "palette", c=c)) for c in range(1, q + 1)]
    gb.clique(clique)
    for v in range(g.num_vertices):
        allowed = inst.allowed_colors(v)
        for c in range(1, q + 1):
            if c not in allowed:
                gb.edge(clique[c - 1], v)
    graph = gb.build()
    extra = frozenset(clique)
    bags = [bag | extra for bag in inst.decomposition.bags] or [extra]
    return Instance(
        kind=Kind.QColoring,
        graph=graph,
        target=None,
        sense=Sense.feasible,
        decomposition=PathDecomposition.of(bags),
        claimed_width_bound=inst.claimed_width_bound + q,
        meta=inst.meta,
    )


def color_connector(colors: dict[int, int], parts: list[dict], v: int, q: int):
    """Extend a colouring of ``v`` and the group vertices over one connector."""
    for part in parts:
        x = part["x"]
        cl = colors[part["group_vertex"]]
        for y, (near, far) in enumerate(part["arms"], 2):
            if far is None:
                colors[near] = y if cl == RED else RED
            elif cl == x:
                colors[near], colors[far] = RED, y
            else:
                colors[near], colors[far] = x, RED
        around = {colors[v]} | {colors[far if far is not None else near] for near, far in part["arms"]}
        colors[part["hub"]] = min(c for c in range(1, q + 1) if c not in around)


def witness(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    """Colouring built from a satisfying assignment; works on the list or the completed instance."""
    meta = inst.meta
    q, p = meta.q, meta.p
    grouping = make_groups(phi.n, q, p, "floor")
    t = grouping.num_groups
    g = inst.graph
    colors: dict[int, int] = {}
    ranks = [restrict(grouping, tau, i).rank for i in range(t)]
    for i in range(t):
        for l, c in enumerate(group_coloring(ranks[i], q, p), 1):
            colors[g.find(label(P, "group", i=i + 1, l=l))] = c
    for j in range(1, phi.m + 1):
        path = []
        for i in range(t):
            for ga in satisfying_group_assignments(phi, grouping, i, j - 1):
                path.append((i, ga.rank, g.find(label(P, "path", j=j, i=i + 1, a=ga.rank))))
        red = next(k for k, (i, rank, _) in enumerate(path) if rank == ranks[i])
        start, end = g.find(label(P, "start", j=j)), g.find(label(P, "end", j=j))
        colors[start] = WHITE
        colors[end] = end_color(len(path))
        prev = WHITE
        for k in range(red):
            prev = BLACK if prev == WHITE else WHITE
            colors[path[k][2]] = prev
        colors[path[red][2]] = RED
        nxt = colors[end]
        for k in range(len(path) - 1, red, -1):
            nxt = BLACK if nxt == WHITE else WHITE
            colors[path[k][2]] = nxt
        for i, rank, v in path:
            parts = _connector_parts(g, j, i, rank, p, q, mu=group_coloring(rank, q, p))
            color_connector(colors, parts, v, q)
    for c in range(1, q + 1):
        v = g.vertex_by_label.get(label(P, "palette", c=c))
        if v is not None:
            colors[v] = c
    return Solution(colors=tuple(colors[v] for v in range(g.num_vertices)))


def _connector_parts(g, j: int, i: int, rank: int, p: int, q: int, mu) -> list[dict]:
    """Recover the connector layout of path vertex (j, i, rank) from labels."""
    tag = {"j": j, "i": i + 1, "a": rank}
    parts = []
    for l in range(1, p + 1):
        u = g.find(label(P, "group", i=i + 1, l=l))
        for x in range(1, q + 1):
            if x == mu[l - 1]:
                continue
            arms = []
            for y in range(2, q + 1):
                near = g.find(label(P, "w", **tag, l=l, x=x, y=y))
                far = None if x == RED else g.find(label(P, "wp", **tag, l=l, x=x, y=y))
                arms.append((near, far))
            parts.append({"l": l, "x": x, "group_vertex": u, "hub": g.find(label(P, "hub", **tag, l=l, x=x)), "arms": arms})
    return parts
