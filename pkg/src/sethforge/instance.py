"""Problem instances, candidate solutions and the solution checker."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from sethforge.errors import ShapeMismatch
from sethforge.graphcore import Graph, PathDecomposition


class Kind(str, Enum):
    IndependentSet = "IndependentSet"
    DominatingSet = "DominatingSet"
    MaxCut = "MaxCut"
    QColoring = "QColoring"
    QListColoring = "QListColoring"
    OddCycleTransversal = "OddCycleTransversal"
    TrianglePacking = "TrianglePacking"
    PartitionIntoTriangles = "PartitionIntoTriangles"


class Sense(str, Enum):
    at_least = "at_least"
    at_most = "at_most"
    feasible = "feasible"


SENSE_OF = {
    Kind.IndependentSet: Sense.at_least,
    Kind.DominatingSet: Sense.at_most,
    Kind.MaxCut: Sense.at_least,
    Kind.QColoring: Sense.feasible,
    Kind.QListColoring: Sense.feasible,
    Kind.OddCycleTransversal: Sense.at_most,
    Kind.TrianglePacking: Sense.at_least,
    Kind.PartitionIntoTriangles: Sense.feasible,
}

COLORING_KINDS = (Kind.QColoring, Kind.QListColoring)


@dataclass(frozen=True)
class ReductionMeta:
    n: int
    m: int
    p: int | None = None
    q: int | None = None
    t: int | None = None
    beta: int | None = None
    budget_items: Mapping[str, int] | None = None
    mu: int | None = None
    arrow_count: int | None = None
    W: int | None = None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "q": self.q,
            "t": self.t,
            "beta": self.beta,
            "budget_items": dict(self.budget_items) if self.budget_items is not None else None,
            "mu": self.mu,
            "arrow_count": self.arrow_count,
            "W": self.W,
        }


@dataclass(frozen=True, eq=False)
class Instance:
    kind: Kind
    graph: Graph
    target: int | None
    sense: Sense
    decomposition: PathDecomposition
    claimed_width_bound: int
    meta: ReductionMeta
    lists: Mapping[int, frozenset[int]] | None = None
    experimental: bool = False

    def __post_init__(self):
        if (self.target is None) != (self.sense is Sense.feasible):
            raise ValueError("target must be present exactly when sense is not 'feasible'")

    @property
    def q(self) -> int | None:
        return self.meta.q

    def allowed_colors(self, v: int) -> frozenset[int] | range:
        if self.lists is not None and v in self.lists:
            return self.lists[v]
        return range(1, self.meta.q + 1)


@dataclass(frozen=True)
class Solution:
    """Exactly one field is set, matching the instance kind."""

    vertices: frozenset[int] | None = None
    sides: tuple[int, ...] | None = None
    colors: tuple[int, ...] | None = None
    triangles: tuple[tuple[int, int, int], ...] | None = None

    @property
    def shape(self) -> str:
        present = [k for k in ("vertices", "sides", "colors", "triangles") if getattr(self, k) is not None]
        if len(present) != 1:
            raise ShapeMismatch(f"solution must carry exactly one field, has {present}")
        return present[0]


SHAPE_OF = {
    Kind.IndependentSet: "vertices",
    Kind.DominatingSet: "vertices",
    Kind.OddCycleTransversal: "vertices",
    Kind.MaxCut: "sides",
    Kind.QColoring: "colors",
    Kind.QListColoring: "colors",
    Kind.TrianglePacking: "triangles",
    Kind.PartitionIntoTriangles: "triangles",
}


def is_independent(g: Graph, s) -> bool:
    return not any(u in s and v in s for u, v in g.edges)


def is_dominating(g: Graph, s) -> bool:
    return all(v in s or g.adj[v] & s for v in range(g.num_vertices))


def cut_weight(g: Graph, sides) -> int:
    return sum(w for (u, v), w in g.edges.items() if sides[u] != sides[v])


def is_bipartite_without(g: Graph, removed) -> bool:
    color: dict[int, int] = {}
    for s in range(g.num_vertices):
        if s in removed or s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if w in removed:
                    continue
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def is_triangle_packing(g: Graph, triangles) -> bool:
    seen: set[int] = set()
    for tri in triangles:
        a, b, c = tri
        if len({a, b, c}) != 3 or seen & {a, b, c}:
            return False
        if not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)):
            return False
        seen |= {a, b, c}
    return True


def objective(inst: Instance, s: Solution) -> int:
    shape = s.shape
    if shape == "vertices":
        return len(s.vertices)
    if shape == "sides":
        return cut_weight(inst.graph, s.sides)
    if shape == "triangles":
        return len(s.triangles)
    return 1


def check_solution(inst: Instance, s: Solution) -> bool:
    """Feasibility of ``s`` for ``inst`` together with its target comparison."""
    if s.shape != SHAPE_OF[inst.kind]:
        raise ShapeMismatch(f"{inst.kind.value} expects {SHAPE_OF[inst.kind]}, got {s.shape}")
    g = inst.graph
    kind = inst.kind
    if kind is Kind.IndependentSet:
        return is_independent(g, s.vertices) and len(s.vertices) >= inst.target
    if kind is Kind.DominatingSet:
        return is_dominating(g, s.vertices) and len(s.vertices) <= inst.target
    if kind is Kind.OddCycleTransversal:
        return is_bipartite_without(g, s.vertices) and len(s.vertices) <= inst.target
    if kind is Kind.MaxCut:
        if len(s.sides) != g.num_vertices or not set(s.sides) <= {0, 1}:
            return False
        return cut_weight(g, s.sides) >= inst.target
    if kind in COLORING_KINDS:
        if len(s.colors) != g.num_vertices:
            return False
        if any(s.colors[v] not in inst.allowed_colors(v) for v in range(g.num_vertices)):
            return False
        return all(s.colors[u] != s.colors[v] for u, v in g.edges)
    if kind is Kind.TrianglePacking:
        return is_triangle_packing(g, s.triangles) and len(s.triangles) >= inst.target
    if kind is Kind.PartitionIntoTriangles:
        return is_triangle_packing(g, s.triangles) and 3 * len(s.triangles) == g.num_vertices
    raise ShapeMismatch(f"unknown kind {kind}")


@dataclass
class Answer:
    """Solver verdict. ``optimum`` is an int, a bool for feasibility kinds, or None when a budgeted search proved it exceeds the budget."""

    optimum: int | bool | None
    verdict: bool
    solution: Solution | None = None
    stats: dict = field(default_factory=dict)


def verdict_for(inst: Instance, optimum: int | bool) -> bool:
    if inst.sense is Sense.feasible:
        return bool(optimum)
    if inst.sense is Sense.at_least:
        return optimum >= inst.target
    return optimum <= inst.target
