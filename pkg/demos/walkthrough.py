"""Reduce one small formula to every problem, check the certificate, decide it and build a witness."""

from sethforge.formula import CnfFormula, brute_force_sat
from sethforge.graphcore import validate_path_decomposition
from sethforge.instance import check_solution, objective
from sethforge.pipeline import PROBLEMS, build_witness, decide, reduce_formula

phi = CnfFormula.from_lists(2, [[1, -2], [2]])
tau = brute_force_sat(phi)
print(f"formula {phi}  satisfying assignment {tau}")

for problem in PROBLEMS:
    inst = reduce_formula(problem, phi)
    width = validate_path_decomposition(inst.graph, inst.decomposition)
    line = f"{problem:<9} |V|={inst.graph.num_vertices:<5} width {width:>2} <= {inst.claimed_width_bound:<3}"
    if inst.experimental:
        print(line, "experimental, not solved")
        continue
    answer = decide(inst)
    line += f" target {inst.target}  verdict {'yes' if answer.verdict else 'no'}"
    w = build_witness(inst, phi, tau)
    print(line, f" witness ok={check_solution(inst, w)} value={objective(inst, w)}")
