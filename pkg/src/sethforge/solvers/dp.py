"""Dynamic programming over nice path decompositions.

One engine, seven state alphabets. A state assigns one symbol to every live
vertex and is packed into an integer, most significant digit = earliest
introduced live vertex, so integer order is lexicographic order of the
symbol tuple. A table is a pair of arrays (keys, costs); costs are minimised
(maximisation objectives are stored negated). Tables are deduplicated by key
after every step, so a table never holds more than ``base ** live`` states.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from sethforge.errors import CapExceeded, UnsupportedKind
from sethforge.graphcore import Graph, Introduce, NicePathDecomposition, PathDecomposition, nicify
from sethforge.instance import COLORING_KINDS, Answer, Instance, Kind, Solution, verdict_for
from sethforge.solvers import _kernels

DEFAULT_STATE_CAP = 1 << 28
_KEY_LIMIT = 1 << 62

# DS symbols
IN, DOM, UND = 0, 1, 2
# OCT symbols
Z, LEFT, RIGHT = 0, 1, 2

BASE = {
    Kind.IndependentSet: 2,
    Kind.DominatingSet: 3,
    Kind.MaxCut: 2,
    Kind.OddCycleTransversal: 3,
    Kind.TrianglePacking: 2,
    Kind.PartitionIntoTriangles: 2,
}
MAXIMISE = (Kind.IndependentSet, Kind.MaxCut, Kind.TrianglePacking)


def state_cap_from_env() -> int:
    raw = os.environ.get("SETHFORGE_STATE_CAP")
    return int(raw) if raw else DEFAULT_STATE_CAP


def base_of(inst: Instance) -> int:
    if inst.kind in COLORING_KINDS:
        return inst.meta.q
    if inst.kind not in BASE:
        raise UnsupportedKind(inst.kind.value)
    return BASE[inst.kind]


@dataclass
class _Back:
    keys: np.ndarray  # sorted unique keys after the step
    prev: np.ndarray  # predecessor key for each
    choice: np.ndarray  # option code taken (introduce) or forgotten symbol
    pairs: list | None = None  # packing: option code k >= 1 means pairs[k - 1]


def _dedupe(nk, nc, pk, ch, exact_ties=True):
    """Keep the cheapest entry per key; ties go to the smallest predecessor.

    Without ``exact_ties`` equal-cost duplicates may keep any predecessor,
    which lets one packed sort replace the three-way one.
    """
    if len(nk) == 0:
        return nk, nc, pk, ch
    low = int(nc.min())
    span = int(nc.max()) - low + 1
    if not exact_ties and int(nk.max()) < _KEY_LIMIT // span:
        order = np.argsort(nk * span + (nc - low))
    else:
        order = np.lexsort((pk, nc, nk))
    nk, nc, pk, ch = nk[order], nc[order], pk[order], ch[order]
    first = np.empty(len(nk), dtype=bool)
    first[0] = True
    np.not_equal(nk[1:], nk[:-1], out=first[1:])
    return nk[first], nc[first], pk[first], ch[first]


def solve(
    inst: Instance,
    nice: NicePathDecomposition | None = None,
    *,
    witness: bool = True,
    state_cap: int | None = None,
    budget: int | None = None,
    pieces: list[list[int]] | None = None,
) -> Answer:
    """Exact optimum of ``inst`` by DP over ``nice`` (default: the instance's own certificate).

    With ``budget`` (odd cycle transversal only) states are dropped once their
    cost plus a lower bound on the not yet introduced part exceeds the budget.
    The bound sums exact optima of the ``pieces`` (disjoint vertex sets) that
    lie wholly in the future. The verdict against the budget stays exact; when
    no state survives the optimum is reported as None (above the budget).
    """
    kind = inst.kind
    b = base_of(inst)
    if kind is Kind.MaxCut and inst.graph.is_weighted:
        raise UnsupportedKind("weighted MaxCut is solved by brute force only; expand it first")
    weight = None
    classes = None
    work = inst
    if kind is Kind.OddCycleTransversal and nice is None:
        quotient, decomposition, classes = twin_quotient(inst.graph, inst.decomposition)
        if quotient.num_vertices < inst.graph.num_vertices:
            weight = [len(c) for c in classes]
            work = replace(inst, graph=quotient, decomposition=decomposition)
            nice = nicify(quotient, decomposition)
        else:
            classes = None
    if nice is None:
        nice = nicify(inst.graph, inst.decomposition)
    if b ** (nice.width + 1) >= _KEY_LIMIT:
        raise CapExceeded(f"{b}^{nice.width + 1} state encoding exceeds 62 bits")
    cap = state_cap if state_cap is not None else state_cap_from_env()
    g = work.graph
    future = None
    if budget is not None:
        if kind is not Kind.OddCycleTransversal:
            raise UnsupportedKind("budgeted search is implemented for odd cycle transversal only")
        owner = {}
        for k, piece in enumerate(pieces or []):
            for v in piece:
                owner[v] = k
        grouped: dict[int, list[int]] = {}
        for v in range(g.num_vertices):
            members = classes[v] if classes else [v]
            grouped.setdefault(owner.get(members[0], -1 - v), []).append(v)
        future = _PieceBounds(g, weight, nice, list(grouped.values()))
    pw = [b**k for k in range(nice.width + 2)]

    live: list[int] = []
    keys = np.zeros(1, dtype=np.int64)
    costs = np.zeros(1, dtype=np.int64)
    backs: list[_Back] = []
    max_states = 1
    transitions = 0
    law_ok = True  # states per step never exceed base ** live

    for at, step in enumerate(nice.steps):
        L = len(live)
        if kind is Kind.OddCycleTransversal:
            keys, costs, prev, choice = _oct_step(step, at, keys, costs, live, pw, weight, future, budget, witness)
            transitions += len(keys)
            if witness:
                backs.append(_Back(keys, prev, choice))
            max_states = max(max_states, len(keys))
            law_ok &= len(keys) <= pw[len(live)]
            if len(keys) > cap:
                raise CapExceeded(f"{len(keys)} DP states exceed cap {cap}")
            continue

        def digit(k, keys=keys, L=L):
            return (keys // pw[L - 1 - k]) % b

        pairs = None
        if isinstance(step, Introduce):
            index = {u: k for k, u in enumerate(live)}
            nbr = sorted(index[u] for u in step.neighbors)
            shifted = keys * b
            options: list[tuple[np.ndarray, np.ndarray, np.ndarray, int]] = []
            # (new keys, new costs, mask over current table, choice code)
            if kind is Kind.IndependentSet:
                hit = np.zeros(len(keys), dtype=bool)
                for k in nbr:
                    hit |= digit(k) == 1
                options.append((shifted, costs, None, 0))
                options.append((shifted + 1, costs - 1, ~hit, 1))
            elif kind is Kind.MaxCut:
                ones = np.zeros(len(keys), dtype=np.int64)
                for k in nbr:
                    ones += digit(k)
                options.append((shifted, costs - ones, None, 0))
                options.append((shifted + 1, costs - (len(nbr) - ones), None, 1))
            elif kind is Kind.DominatingSet:
                dominated = np.zeros(len(keys), dtype=bool)
                promoted = keys.copy()
                for k in nbr:
                    d = digit(k)
                    dominated |= d == IN
                    promoted -= np.where(d == UND, (UND - DOM) * pw[L - 1 - k], 0)
                options.append((promoted * b + IN, costs + 1, None, 0))
                options.append((shifted + np.where(dominated, DOM, UND), costs, None, 1))
            elif kind in COLORING_KINDS:
                ds = [digit(k) for k in nbr]
                for c in sorted(inst.allowed_colors(step.vertex)):
                    clash = np.zeros(len(keys), dtype=bool)
                    for d in ds:
                        clash |= d == c - 1
                    options.append((shifted + (c - 1), costs, ~clash, c))
            else:  # triangle packing / partition
                options.append((shifted, costs, None, 0))
                pairs = [
                    (index[a], index[c])
                    for a, c in combinations(sorted(step.neighbors), 2)
                    if g.has_edge(a, c)
                ]
                for code, (ka, kc) in enumerate(pairs, 1):
                    free = (digit(ka) == 0) & (digit(kc) == 0)
                    moved = keys + pw[L - 1 - ka] + pw[L - 1 - kc]
                    options.append((moved * b + 1, costs - 1, free, code))
            nk, nc, pk, ch = [], [], [], []
            if pairs is None and kind is not Kind.DominatingSet:
                # options append distinct digits in increasing order to unique sorted keys,
                # so interleaving them row by row is already sorted and duplicate free
                full = np.ones(len(keys), dtype=bool)
                mask = np.stack([full if o[2] is None else o[2] for o in options], axis=1).ravel()
                nk = np.stack([o[0] for o in options], axis=1).ravel()[mask]
                nc = np.stack([o[1] for o in options], axis=1).ravel()[mask]
                pk = np.repeat(keys, len(options))[mask]
                ch = np.tile(np.array([o[3] for o in options], dtype=np.int64), len(keys))[mask]
                options = []
            for new_keys, new_costs, mask, code in options:
                if mask is None:
                    nk.append(new_keys), nc.append(new_costs), pk.append(keys)
                    ch.append(np.full(len(keys), code, dtype=np.int64))
                else:
                    nk.append(new_keys[mask]), nc.append(new_costs[mask]), pk.append(keys[mask])
                    ch.append(np.full(int(mask.sum()), code, dtype=np.int64))
            if options:
                nk, nc, pk, ch = (np.concatenate(a) for a in (nk, nc, pk, ch))
            live.append(step.vertex)
        else:
            i = live.index(step.vertex)
            d = digit(i)
            if kind is Kind.DominatingSet:
                ok = d != UND
            elif kind is Kind.PartitionIntoTriangles:
                ok = d == 1
            else:
                ok = None
            high = keys // pw[L - i]
            low = keys % pw[L - 1 - i]
            nk = high * pw[L - 1 - i] + low
            nc, pk, ch = costs, keys, d
            if ok is not None:
                nk, nc, pk, ch = nk[ok], nc[ok], pk[ok], ch[ok]
            live.pop(i)
        transitions += len(nk)
        if isinstance(step, Introduce) and pairs is None and kind is not Kind.DominatingSet:
            keys, costs, prev, choice = nk, nc, pk, ch
        else:
            keys, costs, prev, choice = _dedupe(nk, nc, pk, ch, exact_ties=witness)
        if witness:
            backs.append(_Back(keys, prev, choice, pairs))
        max_states = max(max_states, len(keys))
        law_ok &= len(keys) <= pw[len(live)]
        if len(keys) > cap:
            raise CapExceeded(f"{len(keys)} DP states exceed cap {cap}")

    stats = {"max_states": max_states, "transitions": transitions, "width": nice.width, "state_law": law_ok}
    feasible = len(keys) > 0
    if kind in COLORING_KINDS or kind is Kind.PartitionIntoTriangles:
        optimum: int | bool = feasible
    elif not feasible:
        # only reachable with a budget: every completion costs more than it
        stats["pruned"] = True
        return Answer(optimum=None, verdict=False, solution=None, stats=stats)
    else:
        optimum = int(-costs[0]) if kind in MAXIMISE else int(costs[0])
    solution = _reconstruct(work, nice, backs) if witness and feasible else None
    if solution is not None and weight is not None:
        solution = Solution(vertices=frozenset(v for rep in solution.vertices for v in classes[rep]))
    return Answer(optimum=optimum, verdict=verdict_for(inst, optimum), solution=solution, stats=stats)


_NO_POWERS = np.zeros(0, dtype=np.int64)
_ZERO_TABLE = np.zeros(1, dtype=np.int64)


class _PieceBounds:
    """Lower bounds on the cost still to come, one term per piece.

    A piece is a vertex set of the (quotient) graph. Once some of its vertices
    are introduced, its term is the cheapest way to finish the rest of the
    piece given the symbols its live vertices carry, counting only edges
    inside the piece. The terms are exact optima of small subgraphs, so
    their sum never overshoots; tables are cached by the subgraph's shape.
    Pieces not yet started contribute their full optimum through ``unopened``.
    """

    def __init__(self, g: Graph, weight, nice: NicePathDecomposition, pieces):
        self.g = g
        self.weight = weight
        steps = len(nice.steps)
        self.intro = [steps] * g.num_vertices
        self.forget = [steps] * g.num_vertices
        for at, step in enumerate(nice.steps):
            if isinstance(step, Introduce):
                self.intro[step.vertex] = at
            else:
                self.forget[step.vertex] = at
        self.cache: dict[tuple, np.ndarray] = {}
        self.pieces = [sorted(p, key=self.intro.__getitem__) for p in pieces if p]
        self.piece_of = [0] * g.num_vertices
        self.unopened = np.zeros(steps + 1, dtype=np.int64)
        for k, piece in enumerate(self.pieces):
            for v in piece:
                self.piece_of[v] = k
            self.unopened[: self.intro[piece[0]]] += self._table([], piece)[0]

    def lookup(self, vertex: int, at: int, live: list[int], pw) -> tuple[np.ndarray, np.ndarray]:
        """Digit powers and table giving the term of ``vertex``'s piece after step ``at``."""
        piece = self.pieces[self.piece_of[vertex]]
        rest = [v for v in piece if self.intro[v] > at]
        if self.intro[piece[0]] > at or not rest:
            return _NO_POWERS, _ZERO_TABLE
        boundary = [v for v in piece if self.intro[v] <= at < self.forget[v]]
        L = len(live)
        powers = np.array([pw[L - 1 - live.index(v)] for v in boundary], dtype=np.int64)
        return powers, self._table(boundary, rest)

    def _table(self, boundary, rest) -> np.ndarray:
        order = boundary + rest
        local = {v: k for k, v in enumerate(order)}
        edges = tuple(sorted(
            (min(local[u], local[v]), max(local[u], local[v]))
            for v in rest for u in self.g.adj[v] if u in local
        ))
        w = tuple(self.weight[v] if self.weight else 1 for v in rest)
        shape = (len(boundary), w, edges)
        if shape not in self.cache:
            self.cache[shape] = _oct_completion(len(boundary), len(order), w, edges)
        return self.cache[shape]


def _oct_completion(nb: int, n: int, w, edges) -> np.ndarray:
    """Cheapest deletion set over vertices nb..n-1 for every symbol tuple on vertices 0..nb-1."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    last = [max([u for u in adj[v]] + [v]) for v in range(n)]
    live = list(range(nb))
    keys = np.arange(3**nb, dtype=np.int64)
    costs = np.zeros(len(keys), dtype=np.int64)
    for v in range(nb, n):
        L = len(live)
        has_l = np.zeros(len(keys), dtype=bool)
        has_r = np.zeros(len(keys), dtype=bool)
        for k, u in enumerate(live):
            if u in adj[v]:
                d = (keys // 3 ** (L - 1 - k)) % 3
                has_l |= d == LEFT
                has_r |= d == RIGHT
        keys = np.concatenate([keys * 3 + Z, (keys * 3 + LEFT)[~has_l], (keys * 3 + RIGHT)[~has_r]])
        costs = np.concatenate([costs + w[v - nb], costs[~has_l], costs[~has_r]])
        live.append(v)
        for u in [u for u in live if u >= nb and last[u] <= v]:
            k = live.index(u)
            L = len(live)
            keys = keys // 3 ** (L - k) * 3 ** (L - 1 - k) + keys % 3 ** (L - 1 - k)
            live.pop(k)
        order = np.lexsort((costs, keys))
        keys, costs = keys[order], costs[order]
        first = np.ones(len(keys), dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        keys, costs = keys[first], costs[first]
    table = np.empty(3**nb, dtype=np.int64)
    table[keys] = costs
    return table


def _oct_step(step, at, keys, costs, live, pw, weight, future, budget, witness):
    """One odd cycle transversal step. ``live`` is updated in place.

    With piece bounds, costs carry the pending terms of every started piece,
    so only the piece owning this step's vertex has its term swapped.
    """
    v = step.vertex
    limit = _KEY_LIMIT
    old = new = (_NO_POWERS, _ZERO_TABLE)
    if future is not None:
        limit = budget - int(future.unopened[at])
        old = future.lookup(v, at - 1, live, pw)
    L = len(live)
    if isinstance(step, Introduce):
        nbr = np.array([pw[L - 1 - live.index(u)] for u in step.neighbors], dtype=np.int64)
        live.append(v)
        if future is not None:
            new = future.lookup(v, at, live, pw)
        return _kernels.oct_introduce(keys, costs, nbr, weight[v] if weight else 1, *old, *new, limit)
    i = live.index(v)
    live.pop(i)
    if future is not None:
        new = future.lookup(v, at, live, pw)
    out = _kernels.oct_forget(keys, costs, pw[L - 1 - i], *old, *new, limit)
    return _dedupe(*out, exact_ties=witness)


def twin_quotient(g: Graph, d: PathDecomposition) -> tuple[Graph, PathDecomposition, list[list[int]]]:
    """Collapse each class of false twins (equal neighbourhoods) to one vertex.

    In a minimum odd cycle transversal a twin class is either wholly deleted
    or wholly kept (a kept twin can host any deleted sibling on its own side),
    so the quotient with class sizes as deletion costs has the same optimum.
    Returns the quotient, its decomposition, and the class of each quotient vertex.
    """
    by_nbhd: dict[frozenset[int], list[int]] = {}
    for v in range(g.num_vertices):
        by_nbhd.setdefault(g.adj[v], []).append(v)
    reps = sorted(members[0] for members in by_nbhd.values())
    quotient, keep = g.induced(reps)
    classes = [by_nbhd[g.adj[v]] for v in keep]
    index = {v: k for k, v in enumerate(keep)}
    bags = [frozenset(index[v] for v in bag if v in index) for bag in d.bags]
    return quotient, PathDecomposition.of(b for b in bags if b), classes


def _reconstruct(inst: Instance, nice: NicePathDecomposition, backs: list[_Back]) -> Solution:
    kind = inst.kind
    n = inst.graph.num_vertices
    lives: list[list[int]] = []
    live: list[int] = []
    for step in nice.steps:
        lives.append(list(live))
        if isinstance(step, Introduce):
            live.append(step.vertex)
        else:
            live.remove(step.vertex)
    symbol: dict[int, int] = {}
    triangles = []
    key = 0
    for k in range(len(nice.steps) - 1, -1, -1):
        back = backs[k]
        idx = int(np.searchsorted(back.keys, key))
        assert back.keys[idx] == key
        choice = int(back.choice[idx])
        step = nice.steps[k]
        if isinstance(step, Introduce):
            if back.pairs is not None:
                if choice:
                    a, c = back.pairs[choice - 1]
                    triangles.append(tuple(sorted((lives[k][a], lives[k][c], step.vertex))))
            else:
                symbol[step.vertex] = choice
        key = int(back.prev[idx])
    if kind in (Kind.IndependentSet,):
        return Solution(vertices=frozenset(v for v, x in symbol.items() if x == 1))
    if kind is Kind.DominatingSet:
        return Solution(vertices=frozenset(v for v, x in symbol.items() if x == 0))
    if kind is Kind.OddCycleTransversal:
        return Solution(vertices=frozenset(v for v, x in symbol.items() if x == Z))
    if kind is Kind.MaxCut:
        return Solution(sides=tuple(symbol[v] for v in range(n)))
    if kind in COLORING_KINDS:
        return Solution(colors=tuple(symbol[v] for v in range(n)))
    return Solution(triangles=tuple(sorted(triangles)))
