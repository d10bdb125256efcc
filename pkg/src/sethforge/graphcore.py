"""Labelled graphs, path decompositions, validation and nice normalisation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from sethforge.errors import (
    ContiguityError,
    CoverageError,
    DecompositionError,
    EdgeCoverageError,
    ParseError,
)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph. ``edges`` maps ``(u, v)`` with ``u < v`` to a weight."""

    num_vertices: int
    edges: dict[tuple[int, int], int]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        for (u, v), w in self.edges.items():
            if not (0 <= u < v < self.num_vertices):
                raise ValueError(f"bad edge ({u}, {v}) for {self.num_vertices} vertices")
            if w < 1:
                raise ValueError(f"edge ({u}, {v}) has weight {w}")
        if self.labels and len(self.labels) != self.num_vertices:
            raise ValueError("label table size mismatch")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def vertex_by_label(self) -> dict[str, int]:
        return {lab: v for v, lab in enumerate(self.labels)}

    def find(self, label: str) -> int:
        return self.vertex_by_label[label]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def weight(self, u: int, v: int) -> int:
        return self.edges[(min(u, v), max(u, v))]

    @property
    def is_weighted(self) -> bool:
        return any(w != 1 for w in self.edges.values())

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph with vertices renumbered; also returns the old ids in new order."""
        keep = sorted(set(vertices))
        index = {v: k for k, v in enumerate(keep)}
        edges = {(index[u], index[v]): w for (u, v), w in self.edges.items() if u in index and v in index}
        labels = tuple(self.labels[v] for v in keep) if self.labels else ()
        return Graph(len(keep), edges, labels), keep

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] = ()) -> "Graph":
        return cls(n, {(min(u, v), max(u, v)): 1 for u, v in edges}, tuple(labels))


@dataclass
class GraphBuilder:
    """Mutable accumulator used by the reductions; ``build()`` freezes it."""

    labels: list[str] = field(default_factory=list)
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    def vertex(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def edge(self, u: int, v: int, weight: int = 1):
        if u == v:
            raise ValueError(f"self-loop at {u} ({self.labels[u]})")
        key = (min(u, v), max(u, v))
        old = self.edges.get(key)
        if old is not None and old != weight:
            raise ValueError(f"conflicting weights on edge {key}")
        self.edges[key] = weight

    def clique(self, vs: Sequence[int]):
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                self.edge(vs[a], vs[b])

    def cycle(self, vs: Sequence[int], weight: int = 1):
        for a in range(len(vs)):
            self.edge(vs[a], vs[(a + 1) % len(vs)], weight)

    def path(self, vs: Sequence[int], weight: int = 1):
        for a in range(len(vs) - 1):
            self.edge(vs[a], vs[a + 1], weight)

    def build(self) -> Graph:
        return Graph(len(self.labels), dict(self.edges), tuple(self.labels))


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, bags: Iterable[Iterable[int]]) -> "PathDecomposition":
        return cls(tuple(frozenset(b) for b in bags))

    @classmethod
    def trivial(cls, g: Graph) -> "PathDecomposition":
        return cls((frozenset(range(g.num_vertices)),))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


class BagSweep:
    """Incremental bag emitter: keeps a live set and records a bag after every change.

    Reductions describe their sweep as add/drop operations; consecutive
    bags differ by one vertex, so each recorded bag is a maximal live set
    at that moment. Redundant bags are removed by ``decomposition()``.
    """

    def __init__(self):
        self.live: set[int] = set()
        self.bags: list[frozenset[int]] = []

    def add(self, *vs: int):
        for v in vs:
            if v not in self.live:
                self.live.add(v)
        self.bags.append(frozenset(self.live))

    def drop(self, *vs: int):
        self.bags.append(frozenset(self.live))
        for v in vs:
            self.live.discard(v)

    def visit(self, *vs: int):
        """Bring ``vs`` in together, then release them."""
        self.add(*vs)
        self.drop(*vs)

    def decomposition(self) -> PathDecomposition:
        self.bags.append(frozenset(self.live))
        out: list[frozenset[int]] = []
        for b in self.bags:
            if not b:
                continue
            if out and b <= out[-1]:
                continue
            while out and out[-1] <= b:
                out.pop()
            out.append(b)
        return PathDecomposition(tuple(out))


def validate_path_decomposition(g: Graph, d: PathDecomposition) -> int:
    """Return the width of ``d`` or raise a DecompositionError subclass naming the culprit."""
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    count: dict[int, int] = {}
    for i, bag in enumerate(d.bags):
        for v in bag:
            if not 0 <= v < g.num_vertices:
                raise DecompositionError(f"bag {i} holds out-of-range vertex {v}")
            first.setdefault(v, i)
            last[v] = i
            count[v] = count.get(v, 0) + 1
    for v in range(g.num_vertices):
        if v not in first:
            raise CoverageError(v)
    for v in sorted(first):
        if last[v] - first[v] + 1 != count[v]:
            raise ContiguityError(v)
    for u, v in sorted(g.edges):
        if max(first[u], first[v]) > min(last[u], last[v]):
            raise EdgeCoverageError((u, v))
    return d.width


@dataclass(frozen=True)
class Introduce:
    vertex: int
    neighbors: frozenset[int]  # live neighbours at introduction time


@dataclass(frozen=True)
class Forget:
    vertex: int


@dataclass(frozen=True)
class NicePathDecomposition:
    steps: tuple[Introduce | Forget, ...]

    @property
    def width(self) -> int:
        live = peak = 0
        for s in self.steps:
            live += 1 if isinstance(s, Introduce) else -1
            peak = max(peak, live)
        return peak - 1


def nicify(g: Graph, d: PathDecomposition) -> NicePathDecomposition:
    validate_path_decomposition(g, d)
    steps: list[Introduce | Forget] = []
    live: set[int] = set()

    def introduce(v):
        steps.append(Introduce(v, frozenset(g.adj[v] & live)))
        live.add(v)

    prev: frozenset[int] = frozenset()
    for bag in d.bags:
        for v in sorted(prev - bag):
            steps.append(Forget(v))
            live.discard(v)
        for v in sorted(bag - prev):
            introduce(v)
        prev = bag
    for v in sorted(prev):
        steps.append(Forget(v))
    return NicePathDecomposition(tuple(steps))


# --- PACE-style serialisation ---------------------------------------------


def write_gr(g: Graph) -> str:
    lines = [f"p tw {g.num_vertices} {g.num_edges}"]
    lines += [f"c label {v + 1} {lab}" for v, lab in enumerate(g.labels)]
    lines += [f"{u + 1} {v + 1}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_gr(text: str) -> Graph:
    header = None
    labels: dict[int, str] = {}
    edges: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "c":
            if len(parts) >= 4 and parts[1] == "label":
                labels[int(parts[2]) - 1] = parts[3]
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "tw":
                raise ParseError("header", f"line {lineno}: expected 'p tw <n> <m>'")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ParseError("header", f"line {lineno}: edge before header")
        if len(parts) != 2:
            raise ParseError("syntax", f"line {lineno}: expected '<u> <v>'")
        u, v = int(parts[0]) - 1, int(parts[1]) - 1
        if not (0 <= u < header[0] and 0 <= v < header[0]) or u == v:
            raise ParseError("vertex-range", f"line {lineno}: bad edge {parts[0]} {parts[1]}")
        edges[(min(u, v), max(u, v))] = 1
    if header is None:
        raise ParseError("header", "missing 'p tw' header")
    if len(edges) != header[1]:
        raise ParseError("edge-count", f"header declares {header[1]} edges, found {len(edges)}")
    lab = tuple(labels.get(v, f"v{v + 1}") for v in range(header[0])) if labels else ()
    return Graph(header[0], edges, lab)


def write_td(d: PathDecomposition, num_vertices: int) -> str:
    lines = [f"s td {len(d.bags)} {d.width + 1} {num_vertices}"]
    for i, bag in enumerate(d.bags, 1):
        lines.append(" ".join(["b", str(i), *(str(v + 1) for v in sorted(bag))]))
    lines += [f"{i} {i + 1}" for i in range(1, len(d.bags))]
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> PathDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    tree_edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError("header", f"line {lineno}: expected 's td <bags> <w+1> <n>'")
            header = tuple(int(x) for x in parts[2:])
        elif parts[0] == "b":
            bags[int(parts[1])] = frozenset(int(x) - 1 for x in parts[2:])
        else:
            tree_edges.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise ParseError("header", "missing 's td' header")
    if sorted(bags) != list(range(1, header[0] + 1)):
        raise ParseError("bag-count", f"expected bags 1..{header[0]}")
    if sorted(tuple(sorted(e)) for e in tree_edges) != [(i, i + 1) for i in range(1, header[0])]:
        raise ParseError("not-a-path", "bag edges must form the path 1-2-...-k")
    return PathDecomposition(tuple(bags[i] for i in range(1, header[0] + 1)))
