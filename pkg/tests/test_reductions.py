import pytest

from sethforge.errors import DegenerateInput
from sethforge.formula import CnfFormula
from sethforge.graphcore import Graph, GraphBuilder, PathDecomposition, validate_path_decomposition
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, check_solution, objective
from sethforge.pipeline import PROBLEMS, build_witness, reduce_formula
from sethforge.reductions import coloring, dominating_set, independent_set, max_cut, oct, triangles
from sethforge.reductions.common import parse_label
from sethforge.solvers import brute, dp

X11 = CnfFormula.from_lists(1, [[1, 1]])
X1_NX2 = CnfFormula.from_lists(2, [[1, -2]])
UNSAT = CnfFormula.from_lists(1, [[1, 1], [-1, -1]])


def test_empty_formula_is_degenerate():
    empty = CnfFormula.from_lists(1, [])
    for problem in PROBLEMS:
        with pytest.raises(DegenerateInput):
            reduce_formula(problem, empty)


@pytest.mark.parametrize("problem", PROBLEMS)
def test_labels_are_unique_and_prefixed(problem):
    g = reduce_formula(problem, X1_NX2).graph
    assert len(set(g.labels)) == g.num_vertices
    assert all(parse_label(lab)[0] for lab in g.labels)


def test_independent_set_counts():
    inst = independent_set.reduce_independent_set(X11)
    assert inst.graph.num_vertices == 20 and inst.target == 10
    assert brute.brute_force(inst).optimum == 10
    s = build_witness(inst, X11, (True,))
    assert len(s.vertices) == 10 and check_solution(inst, s)


def test_independent_set_unsat_falls_short():
    inst = independent_set.reduce_independent_set(UNSAT)
    assert inst.graph.num_vertices == 40
    assert brute.brute_force(inst).optimum < inst.target


def test_clause_gadget_c2():
    gb = GraphBuilder()
    independent_set.add_clause_gadget(gb, 2)
    g = gb.build()
    assert g.num_vertices == 8
    assert len(brute.max_independent_set(g)) == 4


def test_dominating_set_counts():
    assert dominating_set.gadget_size(1) == 12
    inst = dominating_set.reduce_dominating_set(X1_NX2, 1)
    assert inst.graph.num_vertices == 127 and inst.target == 21
    assert validate_path_decomposition(inst.graph, inst.decomposition) <= 16
    s = build_witness(inst, X1_NX2, (True, False))
    assert len(s.vertices) == 21 and check_solution(inst, s)
    assert inst.graph.find("DS:h") in s.vertices


def test_dominating_set_unsat():
    inst = dominating_set.reduce_dominating_set(CnfFormula.from_lists(1, [[1], [-1]]), 1)
    assert dp.solve(inst, witness=False).optimum > inst.target


def test_max_cut_weighted_counts():
    inst = max_cut.reduce_max_cut_weighted(X1_NX2)
    g = inst.graph
    assert g.num_vertices == 11 and g.total_weight == 58 and inst.target == 51
    assert brute.max_cut(g)[0] >= 51


def test_max_cut_unsat():
    inst = max_cut.reduce_max_cut_weighted(UNSAT)
    assert brute.max_cut(inst.graph)[0] < inst.target


def _weighted(n, edges):
    g = Graph(n, edges)
    return Instance(Kind.MaxCut, g, 0, Sense.at_least, PathDecomposition.trivial(g), n - 1, ReductionMeta(0, 0))


def test_expansion_examples():
    single = max_cut.expand_to_unweighted(_weighted(2, {(0, 1): 1}))
    assert single.graph.num_vertices == 4 and brute.max_cut(single.graph)[0] == 3
    g = max_cut.expand_to_unweighted(_weighted(2, {(0, 1): 3})).graph
    best = {True: 0, False: 0}
    for mask in range(1 << 6):
        for v_side in (0, 1):
            sides = (0, v_side) + tuple(mask >> k & 1 for k in range(6))
            cut = sum(1 for x, y in g.edges if sides[x] != sides[y])
            best[v_side == 1] = max(best[v_side == 1], cut)
    # each u-a-b-v path crosses 3 edges when u, v are split and at most 2 otherwise
    assert best == {True: 9, False: 6}


def test_coloring_counts():
    inst = coloring.reduce_q_coloring(X1_NX2, 3, 1)
    assert inst.kind is Kind.QListColoring and inst.meta.t == 2
    path = [v for v, lab in enumerate(inst.graph.labels) if parse_label(lab)[1] == "path"]
    assert len(path) == 2


def test_connector_size_for_white():
    gb = GraphBuilder()
    lists = {}
    u, v = gb.vertex("u"), gb.vertex("v")
    coloring.add_connector(gb, lists, v, [u], [coloring.WHITE], 3)
    assert gb.build().num_vertices - 2 == 8


def test_coloring_gadgets_form_a_forest():
    inst = coloring.complete_lists_to_plain(coloring.reduce_q_coloring(X1_NX2, 3, 1))
    g = inst.graph
    drop = {v for v, lab in enumerate(g.labels) if parse_label(lab)[1] in ("group", "palette")}
    rest, _ = g.induced(v for v in range(g.num_vertices) if v not in drop)
    parent = list(range(rest.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in rest.edges:
        a, b = find(u), find(v)
        assert a != b, "cycle outside the group vertices"
        parent[a] = b


def test_clique_completion_examples():
    g = Graph(1, {}, ("v",))
    base = Instance(
        Kind.QListColoring, g, None, Sense.feasible, PathDecomposition.trivial(g), 0,
        ReductionMeta(0, 0, q=3), lists={0: frozenset({2})},
    )
    plain = coloring.complete_lists_to_plain(base)
    assert plain.graph.num_vertices == 4 and plain.graph.num_edges == 3 + 2
    full = coloring.complete_lists_to_plain(
        Instance(Kind.QListColoring, g, None, Sense.feasible, PathDecomposition.trivial(g), 0, ReductionMeta(0, 0, q=3))
    )
    assert full.graph.num_edges == 3


def test_clique_completion_preserves_feasibility():
    import random

    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 8)
        g = Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4])
        lists = {v: frozenset(rng.sample([1, 2, 3], rng.randint(1, 3))) for v in range(n)}
        inst = Instance(
            Kind.QListColoring, g, None, Sense.feasible, PathDecomposition.trivial(g), n - 1,
            ReductionMeta(0, 0, q=3), lists=lists,
        )
        assert brute.brute_force(inst).optimum == brute.brute_force(coloring.complete_lists_to_plain(inst)).optimum


def test_arrow_counts():
    gb = GraphBuilder()
    u, v = gb.vertex("u"), gb.vertex("v")
    oct.add_arrow(gb, u, v)
    g = gb.build()
    assert (g.num_vertices - 2, g.num_edges) == (7, 12)


def test_oct_counts():
    inst = oct.reduce_oct(X1_NX2, 1)
    meta = inst.meta
    # floor grouping: one variable per group, since 2 assignments fit among 3 good subsets
    assert (meta.beta, meta.t) == (1, 2)
    roles = [parse_label(lab) for lab in inst.graph.labels]
    paths = {(f["i"], f["j"]) for _, role, f in roles if role == "path"}
    assert len(paths) == 2
    assert sum(1 for _, role, _ in roles if role == "path") == 2 * 3 * 1 * (2 + 1)
    assert inst.target == sum(meta.budget_items.values())
    assert meta.budget_items["gadget_arrows"] + meta.budget_items["clause_arrows"] == 2 * meta.arrow_count


def test_triangle_packing_counts():
    inst = triangles.reduce_triangle_packing(X1_NX2)
    assert inst.graph.num_vertices == 32 and inst.target == 9
    assert brute.brute_force(inst).optimum == 9
    s = build_witness(inst, X1_NX2, (True, False))
    assert check_solution(inst, s) and objective(inst, s) == 9


def test_triangle_packing_unsat():
    inst = triangles.reduce_triangle_packing(UNSAT)
    assert brute.brute_force(inst).optimum < inst.target


def test_variable_chain_alone():
    inst = triangles.reduce_triangle_packing(X1_NX2)
    g = inst.graph
    chain = [v for v, lab in enumerate(g.labels) if parse_label(lab)[1] in ("p", "t") and parse_label(lab)[2]["i"] == "1"]
    assert len(chain) == 13
    sub, _ = g.induced(chain)
    assert len(brute.max_triangle_packing(sub)) == 3


def test_partition_padding_counts():
    inst = triangles.to_partition(triangles.reduce_triangle_packing(X1_NX2))
    assert inst.experimental
    assert inst.graph.num_vertices == 56
    n3 = triangles.to_partition(triangles.reduce_triangle_packing(CnfFormula.from_lists(3, [[1, 2, 3]])))
    short = [lab for lab in n3.graph.labels if lab.startswith("TP:Q") and ":i=3:" in lab]
    assert len(short) == 4 * (3 * 1 + 1) // 4 * 2  # two vertices per Q_3^l, four rounds


@pytest.mark.parametrize("problem", ["is", "ds", "maxcut", "qcol", "oct", "packing"])
def test_unsat_formula_has_no_witness(problem):
    from sethforge.errors import NotSatisfying

    inst = reduce_formula(problem, CnfFormula.from_lists(1, [[1], [-1]]))
    with pytest.raises(NotSatisfying):
        build_witness(inst, CnfFormula.from_lists(1, [[1], [-1]]), (True,))
