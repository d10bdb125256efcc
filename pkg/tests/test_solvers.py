import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sethforge.errors import CapExceeded, UnsupportedKind
from sethforge.graphcore import Graph, PathDecomposition, nicify
from sethforge.instance import Instance, Kind, Sense, Solution, check_solution
from sethforge.solvers import brute, dp
from sethforge.suites import CROSS_KINDS, plain_instance, random_graph

K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def test_check_solution_examples():
    ds = plain_instance(K3, Kind.DominatingSet)
    assert check_solution(Instance(**{**ds.__dict__, "target": 1}), Solution(vertices=frozenset({0})))
    ind = plain_instance(K3, Kind.IndependentSet)
    assert not check_solution(ind, Solution(vertices=frozenset({0, 1})))


@st.composite
def graph_with_decomposition(draw):
    """A graph over a random vertex order whose edges only join vertices that share a window."""
    n = draw(st.integers(1, 9))
    window = draw(st.integers(1, 4))
    order = draw(st.permutations(range(n)))
    bags = [set(order[k : k + window + 1]) for k in range(max(1, n - window))]
    pairs = sorted({(min(u, v), max(u, v)) for b in bags for u in b for v in b if u != v})
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])
    return g, PathDecomposition.of(bags)


@settings(max_examples=40, deadline=None)
@given(graph_with_decomposition(), st.sampled_from(CROSS_KINDS))
def test_dp_matches_brute_on_narrow_decompositions(gd, kind):
    g, d = gd
    inst = plain_instance(g, kind)
    a = dp.solve(inst, nicify(g, d))
    assert a.optimum == brute.brute_force(inst).optimum
    if a.solution is not None and inst.sense is not Sense.feasible:
        assert check_solution(Instance(**{**inst.__dict__, "target": a.optimum}), a.solution)


def test_state_law_and_width_stats():
    rng = random.Random(1)
    g = random_graph(rng, 10)
    for kind in (Kind.IndependentSet, Kind.DominatingSet, Kind.MaxCut, Kind.QColoring, Kind.OddCycleTransversal):
        a = dp.solve(plain_instance(g, kind))
        assert a.stats["state_law"]
        assert a.stats["max_states"] <= dp.base_of(plain_instance(g, kind)) ** g.num_vertices


def test_state_cap_from_environment(monkeypatch):
    g = random_graph(random.Random(2), 10)
    monkeypatch.setenv("SETHFORGE_STATE_CAP", "4")
    with pytest.raises(CapExceeded):
        dp.solve(plain_instance(g, Kind.DominatingSet))
    with pytest.raises(CapExceeded):
        dp.solve(plain_instance(g, Kind.IndependentSet), state_cap=2)


def test_weighted_max_cut_needs_expansion():
    g = Graph(2, {(0, 1): 2})
    with pytest.raises(UnsupportedKind):
        dp.solve(plain_instance(g, Kind.MaxCut))


def test_budget_only_for_transversals():
    with pytest.raises(UnsupportedKind):
        dp.solve(plain_instance(K3, Kind.IndependentSet), budget=1)


def test_budgeted_transversal():
    rng = random.Random(5)
    for _ in range(15):
        g = random_graph(rng, rng.randint(3, 10))
        inst = plain_instance(g, Kind.OddCycleTransversal)
        best = len(brute.min_odd_cycle_transversal(g))
        at = dp.solve(Instance(**{**inst.__dict__, "target": best}), budget=best)
        assert at.optimum == best and at.verdict
        assert check_solution(Instance(**{**inst.__dict__, "target": best}), at.solution)
        if best > 0:
            below = dp.solve(Instance(**{**inst.__dict__, "target": best - 1}), budget=best - 1)
            assert below.optimum is None and not below.verdict


def test_brute_caps():
    big = Graph.from_edges(30, [])
    with pytest.raises(CapExceeded):
        brute.brute_force(plain_instance(big, Kind.DominatingSet))


def test_brute_examples():
    c5 = Graph.from_edges(5, [(k, (k + 1) % 5) for k in range(5)])
    assert len(brute.min_odd_cycle_transversal(c5)) == 1
    assert brute.max_cut(c5)[0] == 4
    assert brute.list_coloring(c5, lambda v: {1, 2}) is None
    assert len(brute.max_triangle_packing(K3)) == 1
    assert brute.triangle_partition(K3) is not None
