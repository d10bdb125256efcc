import random

import pytest

from sethforge.errors import ContiguityError, CoverageError, EdgeCoverageError, ParseError
from sethforge.graphcore import (
    BagSweep,
    Forget,
    Graph,
    Introduce,
    PathDecomposition,
    nicify,
    parse_gr,
    parse_td,
    validate_path_decomposition,
    write_gr,
    write_td,
)

K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
P3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def test_validate_examples():
    assert validate_path_decomposition(K3, PathDecomposition.of([{0, 1, 2}])) == 2
    assert validate_path_decomposition(P3, PathDecomposition.of([{0, 1}, {1, 2}])) == 1
    with pytest.raises(EdgeCoverageError) as e:
        validate_path_decomposition(K3, PathDecomposition.of([{0, 1}, {1, 2}]))
    assert e.value.edge == (0, 2)


def test_validate_coverage_and_contiguity():
    with pytest.raises(CoverageError):
        validate_path_decomposition(P3, PathDecomposition.of([{0, 1}]))
    with pytest.raises(ContiguityError):
        validate_path_decomposition(P3, PathDecomposition.of([{0, 1}, {1, 2}, {0}]))


def test_nicify_examples():
    steps = nicify(P3, PathDecomposition.of([{0, 1}, {1, 2}])).steps
    assert [(type(s).__name__, s.vertex) for s in steps] == [
        ("Introduce", 0), ("Introduce", 1), ("Forget", 0), ("Introduce", 2), ("Forget", 1), ("Forget", 2),
    ]
    single = nicify(K3, PathDecomposition.trivial(K3)).steps
    assert [type(s) for s in single] == [Introduce] * 3 + [Forget] * 3


def random_decomposed_graph(rng):
    """A random interval-style bag sequence and a graph whose edges fit inside it."""
    n = rng.randint(2, 10)
    order = list(range(n))
    rng.shuffle(order)
    bags, live = [], set()
    for v in order:
        live.add(v)
        bags.append(set(live))
        while len(live) > rng.randint(1, 4):
            live.discard(min(live, key=lambda x: order.index(x)))
    bags.append(set(live))
    edges = {(min(u, v), max(u, v)) for b in bags for u in b for v in b if u != v and rng.random() < 0.5}
    return Graph.from_edges(n, edges), PathDecomposition.of(bags)


def test_nicify_invariants_on_random_decompositions():
    rng = random.Random(7)
    for _ in range(20):
        g, d = random_decomposed_graph(rng)
        nice = nicify(g, d)
        assert len(nice.steps) == 2 * g.num_vertices
        assert nice.width == validate_path_decomposition(g, d)
        seen = []
        for s in nice.steps:
            if isinstance(s, Introduce):
                seen += [(min(s.vertex, u), max(s.vertex, u)) for u in s.neighbors]
        assert sorted(seen) == sorted(g.edges)


def test_trivial_decomposition_width():
    g = Graph.from_edges(5, [(0, 4)])
    assert validate_path_decomposition(g, PathDecomposition.trivial(g)) == 4


def test_gr_td_round_trip():
    g = Graph(3, {(0, 1): 1, (1, 2): 1}, ("A:x", "A:y", "A:z"))
    text = write_gr(g)
    assert text.startswith("p tw 3 2\n") and "c label 1 A:x" in text
    h = parse_gr(text)
    assert (h.num_vertices, h.edges, h.labels) == (g.num_vertices, g.edges, g.labels)
    d = PathDecomposition.of([{0, 1}, {1, 2}])
    assert write_td(d, 3) == "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"
    assert parse_td(write_td(d, 3)) == d


@pytest.mark.parametrize(
    "text, kind",
    [("1 2\n", "header"), ("p tw 2 1\n1 3\n", "vertex-range"), ("p tw 2 2\n1 2\n", "edge-count")],
)
def test_gr_errors(text, kind):
    with pytest.raises(ParseError) as e:
        parse_gr(text)
    assert e.value.kind == kind


def test_td_must_be_a_path():
    with pytest.raises(ParseError) as e:
        parse_td("s td 3 2 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n1 3\n")
    assert e.value.kind == "not-a-path"


def test_bag_sweep_drops_redundant_bags():
    s = BagSweep()
    s.add(0, 1)
    s.visit(2)
    s.drop(0)
    s.add(3)
    assert s.decomposition().bags == (frozenset({0, 1, 2}), frozenset({1, 3}))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(2, {(1, 0): 1})
