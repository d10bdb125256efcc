import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sethforge.errors import CapExceeded, ParseError
from sethforge.formula import (
    CnfFormula,
    GroupAssignment,
    all_assignments,
    assignment_rank,
    brute_force_sat,
    evaluate,
    make_groups,
    pad_to_even,
    parse_dimacs,
    satisfying_group_assignments,
    write_dimacs,
)


def F(n, *clauses):
    return CnfFormula.from_lists(n, clauses)


def test_evaluate_examples():
    assert evaluate(F(1, [1]), (True,))
    assert not any(evaluate(F(1, [1], [-1]), t) for t in all_assignments(1))
    assert evaluate(F(2, [1, -2]), (False, False))


def test_brute_force_sat_lowest_rank():
    assert brute_force_sat(F(1, [1], [-1])) is None
    assert brute_force_sat(F(2, [1, 2])) == (False, True)
    assert brute_force_sat(F(1, [-1])) == (False,)


def test_brute_force_sat_cap():
    with pytest.raises(CapExceeded):
        brute_force_sat(F(30, [1]))


@pytest.mark.parametrize(
    "text, kind",
    [
        ("1 0\n", "header"),
        ("p cnf 1 1\n2 0\n", "variable-range"),
        ("p cnf 1 1\n0\n", "empty-clause"),
        ("p cnf 1 2\n1 0\n", "clause-count"),
        ("p cnf 1 1\n1 x 0\n", "syntax"),
        ("p cnf 1 1\n1\n", "syntax"),
    ],
)
def test_parse_errors(text, kind):
    with pytest.raises(ParseError) as e:
        parse_dimacs(text)
    assert e.value.kind == kind


def test_dimacs_round_trip():
    phi = F(3, [1, -2], [3], [-1, -1])
    assert parse_dimacs(write_dimacs(phi)) == phi
    assert parse_dimacs(b"c hi\np cnf 2 1\n1\n-2 0\n").to_lists() == [[1, -2]]


def test_pad_to_even_examples():
    assert pad_to_even(F(2, [1, -2])) == F(2, [1, -2])
    padded = pad_to_even(F(1, [1]))
    assert padded.to_lists() == [[1, 2], [-2, -2]]
    assert pad_to_even(F(3, [1], [2, 3])).to_lists() == [[1, 4], [2, 3], [-4, -4]]


clause = st.lists(st.integers(1, 5).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(st.lists(clause, min_size=1, max_size=4))
def test_pad_to_even_preserves_satisfiability(clauses):
    phi = F(5, *clauses)
    padded = pad_to_even(phi)
    assert all(c.size % 2 == 0 for c in padded.clauses)
    assert (brute_force_sat(phi) is None) == (brute_force_sat(padded) is None)


def test_evaluate_matches_definition_exhaustively():
    lits = [1, -1, 2, -2]
    clauses = [list(c) for k in (1, 2) for c in itertools.combinations(lits, k)]
    for m in (1, 2):
        for combo in itertools.product(clauses, repeat=m):
            phi = F(2, *combo)
            for tau in all_assignments(2):
                expect = all(any((l > 0) == tau[abs(l) - 1] for l in c) for c in combo)
                assert evaluate(phi, tau) == expect


@pytest.mark.parametrize(
    "n, base, p, rounding, beta, t",
    [(5, 3, 1, "floor", 1, 5), (5, 3, 1, "ceil", 2, 3), (4, 3, 2, "floor", 3, 2)],
)
def test_make_groups(n, base, p, rounding, beta, t):
    g = make_groups(n, base, p, rounding)
    assert (g.group_size, g.num_groups) == (beta, t)
    members = [v for grp in g.groups for v in grp]
    assert sorted(members) == list(range(1, n + 1))


def test_make_groups_ceil_layout():
    assert [list(x) for x in make_groups(5, 3, 1, "ceil").groups] == [[1, 2], [3, 4], [5]]


def test_satisfying_group_assignments():
    phi = F(3, [1, -2])
    one = make_groups(3, 3, 1, "floor")  # singletons
    assert [ga.values for ga in satisfying_group_assignments(phi, one, 0, 0)] == [(True,)]
    assert satisfying_group_assignments(phi, one, 2, 0) == []
    pairs = make_groups(3, 3, 1, "ceil")
    got = {ga.values for ga in satisfying_group_assignments(phi, pairs, 0, 0)}
    assert got == {(False, False), (True, False), (True, True)}


@pytest.mark.parametrize("size", [1, 2, 3])
def test_group_rank_round_trip(size):
    for r in range(1 << size):
        assert GroupAssignment.unrank(1, r, size).rank == r


def test_assignment_rank_msb_first():
    assert assignment_rank((True, False)) == 2
