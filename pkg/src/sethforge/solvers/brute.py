"""Exhaustive oracles. None of these look at the decomposition."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from sethforge.errors import CapExceeded, UnsupportedKind
from sethforge.graphcore import Graph
from sethforge.instance import (
    COLORING_KINDS,
    Answer,
    Instance,
    Kind,
    Solution,
    is_bipartite_without,
    verdict_for,
)

ENUM_CAP = 24
SEARCH_CAP = 64


def _check_cap(g: Graph, cap: int, what: str):
    if g.num_vertices > cap:
        raise CapExceeded(f"{what} on {g.num_vertices} vertices exceeds cap {cap}")


def _masks(g: Graph) -> list[int]:
    return [sum(1 << u for u in g.adj[v]) for v in range(g.num_vertices)]


def max_independent_set(g: Graph) -> frozenset[int]:
    """Branch and bound on bitmasks: take degree <= 1 vertices greedily, else branch on max degree."""
    nbr = _masks(g)
    best = [0, 0]  # size, mask

    def popcount(x):
        return bin(x).count("1")

    def rec(cand: int, size: int, chosen: int):
        if size + popcount(cand) <= best[0]:
            return
        while cand:
            low = None
            pick = None
            pick_deg = -1
            c = cand
            while c:
                b = c & -c
                v = b.bit_length() - 1
                d = popcount(nbr[v] & cand)
                if d <= 1:
                    low = v
                    break
                if d > pick_deg:
                    pick, pick_deg = v, d
                c ^= b
            if low is None:
                break
            chosen |= 1 << low
            size += 1
            cand &= ~((1 << low) | nbr[low])
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + popcount(cand) <= best[0]:
            return
        rec(cand & ~((1 << pick) | nbr[pick]), size + 1, chosen | (1 << pick))
        rec(cand & ~(1 << pick), size, chosen)

    rec((1 << g.num_vertices) - 1, 0, 0)
    return frozenset(v for v in range(g.num_vertices) if best[1] >> v & 1)


def min_dominating_set(g: Graph) -> frozenset[int]:
    n = g.num_vertices
    full = (1 << n) - 1
    closed = [m | (1 << v) for v, m in enumerate(_masks(g))]
    for k in range(n + 1):
        for combo in combinations(range(n), k):
            acc = 0
            for v in combo:
                acc |= closed[v]
            if acc == full:
                return frozenset(combo)
    raise AssertionError("unreachable")


def max_cut(g: Graph) -> tuple[int, tuple[int, ...]]:
    """Vectorised enumeration with vertex 0 pinned to side 0."""
    n = g.num_vertices
    if n <= 1 or not g.edges:
        return 0, (0,) * n
    us = np.array([u for u, _ in g.edges], dtype=np.int64)
    vs = np.array([v for _, v in g.edges], dtype=np.int64)
    ws = np.array(list(g.edges.values()), dtype=np.int64)
    best, best_mask = -1, 0
    total = 1 << (n - 1)
    chunk = 1 << 16
    for lo in range(0, total, chunk):
        masks = (np.arange(lo, min(total, lo + chunk), dtype=np.int64) << 1)
        cross = ((masks[:, None] >> us) ^ (masks[:, None] >> vs)) & 1
        vals = cross @ ws
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_mask = int(vals[k]), int(masks[k])
    return best, tuple((best_mask >> v) & 1 for v in range(n))


def list_coloring(g: Graph, allowed) -> tuple[int, ...] | None:
    """Backtracking over vertices in BFS order; ``allowed(v)`` gives the admissible colours."""
    n = g.num_vertices
    order: list[int] = []
    seen: set[int] = set()
    for s in sorted(range(n), key=lambda v: -len(g.adj[v])):
        if s in seen:
            continue
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop(0)
            order.append(u)
            for w in sorted(g.adj[u]):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    colors = [0] * n
    palettes = [sorted(allowed(v)) for v in range(n)]

    def rec(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for c in palettes[v]:
            if all(colors[u] != c for u in g.adj[v]):
                colors[v] = c
                if rec(k + 1):
                    return True
        colors[v] = 0
        return False

    return tuple(colors) if rec(0) else None


def min_odd_cycle_transversal(g: Graph) -> frozenset[int]:
    n = g.num_vertices
    for k in range(n + 1):
        for combo in combinations(range(n), k):
            if is_bipartite_without(g, set(combo)):
                return frozenset(combo)
    raise AssertionError("unreachable")


def triangles_of(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for u, v in sorted(g.edges):
        for w in sorted(g.adj[u] & g.adj[v]):
            if w > v:
                out.append((u, v, w))
    return out


def max_triangle_packing(g: Graph) -> list[tuple[int, int, int]]:
    """Branch on the lowest free vertex: leave it out, or cover it by one of its triangles."""
    tris = triangles_of(g)
    by_vertex: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(g.num_vertices)}
    for t in tris:
        by_vertex[t[0]].append(t)
    in_some = sorted({v for t in tris for v in t})
    best: list = [[]]

    def rec(idx: int, used: set[int], chosen: list, remaining: int):
        if len(chosen) + remaining // 3 <= len(best[0]):
            return
        while idx < len(in_some) and in_some[idx] in used:
            idx += 1
        if idx == len(in_some):
            if len(chosen) > len(best[0]):
                best[0] = list(chosen)
            return
        v = in_some[idx]
        for t in by_vertex[v]:
            if used.isdisjoint(t):
                used.update(t)
                chosen.append(t)
                rec(idx + 1, used, chosen, remaining - 3)
                chosen.pop()
                used.difference_update(t)
        rec(idx + 1, used, chosen, remaining - 1)

    rec(0, set(), [], len(in_some))
    return best[0]


def triangle_partition(g: Graph) -> list[tuple[int, int, int]] | None:
    """Exact cover: the lowest uncovered vertex must sit in some triangle with larger vertices."""
    if g.num_vertices % 3:
        return None
    tris = triangles_of(g)
    by_min: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(g.num_vertices)}
    for t in tris:
        by_min[t[0]].append(t)
    chosen: list = []
    used: set[int] = set()

    def rec(v: int) -> bool:
        while v < g.num_vertices and v in used:
            v += 1
        if v == g.num_vertices:
            return True
        for t in by_min[v]:
            if used.isdisjoint(t):
                used.update(t)
                chosen.append(t)
                if rec(v + 1):
                    return True
                chosen.pop()
                used.difference_update(t)
        return False

    return list(chosen) if rec(0) else None


def brute_force(inst: Instance, *, enum_cap: int = ENUM_CAP, search_cap: int = SEARCH_CAP) -> Answer:
    g = inst.graph
    kind = inst.kind
    if kind is Kind.IndependentSet:
        _check_cap(g, search_cap, "independent-set search")
        best = max_independent_set(g)
        return _answer(inst, len(best), Solution(vertices=best))
    if kind is Kind.DominatingSet:
        _check_cap(g, enum_cap, "dominating-set enumeration")
        best = min_dominating_set(g)
        return _answer(inst, len(best), Solution(vertices=best))
    if kind is Kind.MaxCut:
        _check_cap(g, enum_cap, "cut enumeration")
        value, sides = max_cut(g)
        return _answer(inst, value, Solution(sides=sides))
    if kind in COLORING_KINDS:
        _check_cap(g, enum_cap, "colouring search")
        colors = list_coloring(g, inst.allowed_colors)
        return _answer(inst, colors is not None, Solution(colors=colors) if colors else None)
    if kind is Kind.OddCycleTransversal:
        _check_cap(g, enum_cap, "transversal enumeration")
        best = min_odd_cycle_transversal(g)
        return _answer(inst, len(best), Solution(vertices=best))
    if kind is Kind.TrianglePacking:
        _check_cap(g, search_cap, "packing search")
        best = max_triangle_packing(g)
        return _answer(inst, len(best), Solution(triangles=tuple(best)))
    if kind is Kind.PartitionIntoTriangles:
        _check_cap(g, search_cap, "partition search")
        part = triangle_partition(g)
        return _answer(inst, part is not None, Solution(triangles=tuple(part)) if part is not None else None)
    raise UnsupportedKind(kind.value)


def _answer(inst: Instance, optimum, solution) -> Answer:
    return Answer(optimum=optimum, verdict=verdict_for(inst, optimum), solution=solution, stats={})
