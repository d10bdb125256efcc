"""Problem registry: formula to instance, instance to verdict, assignment to witness."""

from __future__ import annotations

from typing import Sequence

from sethforge.errors import NotSatisfying, UnsupportedKind
from sethforge.formula import CnfFormula, evaluate
from sethforge.instance import Answer, Instance, Kind, Solution
from sethforge.reductions import coloring, dominating_set, independent_set, max_cut, oct, triangles
from sethforge.solvers import brute, dp

PROBLEMS = ("is", "ds", "maxcut", "qcol", "oct", "packing", "partition")

KIND_OF = {
    "is": Kind.IndependentSet,
    "ds": Kind.DominatingSet,
    "maxcut": Kind.MaxCut,
    "qcol": Kind.QColoring,
    "oct": Kind.OddCycleTransversal,
    "packing": Kind.TrianglePacking,
    "partition": Kind.PartitionIntoTriangles,
}


def reduce_formula(problem: str, phi: CnfFormula, p: int = 1, q: int = 3) -> Instance:
    if problem == "is":
        return independent_set.reduce_independent_set(phi)
    if problem == "ds":
        return dominating_set.reduce_dominating_set(phi, p)
    if problem == "maxcut":
        return max_cut.expand_to_unweighted(max_cut.reduce_max_cut_weighted(phi))
    if problem == "qcol":
        return coloring.complete_lists_to_plain(coloring.reduce_q_coloring(phi, q, p))
    if problem == "oct":
        return oct.reduce_oct(phi, p)
    if problem == "packing":
        return triangles.reduce_triangle_packing(phi)
    if problem == "partition":
        return triangles.to_partition(triangles.reduce_triangle_packing(phi))
    raise UnsupportedKind(f"unknown problem {problem!r}")


def decide(inst: Instance, oracle: str = "dp", witness: bool = False) -> Answer:
    """Solver verdict against the instance target.

    Odd cycle transversal instances carrying reduction labels are decided by
    the budgeted DP; a pruned run reports ``optimum=None`` (above target).
    """
    if oracle == "brute":
        return brute.brute_force(inst)
    if oracle != "dp":
        raise UnsupportedKind(f"unknown oracle {oracle!r}")
    if inst.kind is Kind.OddCycleTransversal and inst.target is not None:
        pieces = oct.lower_bound_pieces(inst.graph)
        return dp.solve(inst, witness=witness, budget=inst.target, pieces=pieces)
    return dp.solve(inst, witness=witness)


def build_witness(inst: Instance, phi: CnfFormula, tau: Sequence[bool]) -> Solution:
    """Solution built from a satisfying assignment, following each reduction's forward argument."""
    if len(tau) != phi.n or not evaluate(phi, tau):
        raise NotSatisfying("assignment does not satisfy the formula")
    kind = inst.kind
    if kind is Kind.IndependentSet:
        return independent_set.witness(inst, phi, tau)
    if kind is Kind.DominatingSet:
        return dominating_set.witness(inst, phi, tau)
    if kind is Kind.MaxCut:
        if inst.graph.is_weighted:
            return max_cut.witness_weighted(inst, phi, tau)
        return max_cut.witness(inst, phi, tau)
    if kind in (Kind.QColoring, Kind.QListColoring):
        return coloring.witness(inst, phi, tau)
    if kind is Kind.OddCycleTransversal:
        return oct.witness(inst, phi, tau)
    if kind is Kind.TrianglePacking:
        return triangles.witness(inst, phi, tau)
    raise UnsupportedKind(f"no witness construction for {kind.value}")

