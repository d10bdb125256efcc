"""Command line: reduce, solve, verify, selftest."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from sethforge import suites
from sethforge.bundle import bundle_stem, read_bundle, solution_json, write_bundle, write_dot
from sethforge.errors import SethForgeError
from sethforge.formula import parse_dimacs
from sethforge.instance import check_solution
from sethforge.pipeline import PROBLEMS, decide, reduce_formula


class IoError(SethForgeError):
    category = "io"


def _read_formula(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise IoError(f"{path}: {e.strerror}") from None
    return parse_dimacs(data)


def _write_json(path: str, doc) -> None:
    try:
        Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    except OSError as e:
        raise IoError(f"{path}: {e.strerror}") from None


def cmd_reduce(args) -> int:
    phi = _read_formula(args.input)
    inst = reduce_formula(args.problem, phi, args.p, args.q)
    name = Path(args.input).stem
    for path in write_bundle(inst, args.o, name):
        print(path)
    if args.dot:
        path = Path(args.o) / f"{name}.dot"
        path.write_text(write_dot(inst.graph))
        print(path)
    return 0


def format_verdict(inst, answer) -> str:
    word = "yes" if answer.verdict else "no"
    if answer.optimum is None:
        return f"{word} >{inst.target}"
    if isinstance(answer.optimum, bool):
        return f"{word} {'feasible' if answer.optimum else 'infeasible'}"
    return f"{word} {answer.optimum}"


def cmd_solve(args) -> int:
    inst = read_bundle(args.bundle)
    answer = decide(inst, args.oracle, witness=args.witness)
    print(format_verdict(inst, answer))
    if args.witness and answer.solution is not None:
        stem = bundle_stem(args.bundle)
        out = Path(args.o) if args.o else stem.parent
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{stem.name}.sol.json"
        doc = solution_json(inst, answer.solution)
        doc["accepted"] = check_solution(inst, answer.solution)
        _write_json(str(path), doc)
        print(path)
    return 0


def cmd_verify(args) -> int:
    phi = _read_formula(args.input)
    problems = args.problem or list(PROBLEMS)
    check = suites.partition_check() if "partition" in problems else None
    report = suites.verify_formula(
        phi,
        problems,
        p=args.p,
        q=args.q,
        name=Path(args.input).name,
        partition_check_passed=check.passed if check else None,
    )
    print(report.table())
    if check:
        print(check.summary())
    if args.json:
        doc = report.as_json()
        if check:
            doc["partition_check"] = {"passed": check.passed, "rows": check.rows}
        _write_json(args.json, doc)
    return 0 if report.passed else 1


def cmd_selftest(args) -> int:
    sections, check = suites.selftest(args.seed, log=print)
    ok = all(s.passed for s in sections)
    print("selftest", "PASS" if ok else "FAIL")
    if args.json:
        _write_json(
            args.json,
            {
                "seed": args.seed,
                "pass": ok,
                "sections": [
                    {"name": s.name, "pass": s.passed, "failures": s.failures} for s in sections
                ],
                "partition_check": {"passed": check.passed, "summary": check.summary(), "rows": check.rows},
            },
        )
    return 0 if ok else 1


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sethforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def params(p):
        p.add_argument("--p", type=int, default=1, help="group parameter for ds, qcol, oct")
        p.add_argument("--q", type=int, default=3, help="number of colours for qcol")

    p = sub.add_parser("reduce", help="compile a DIMACS formula into an instance bundle")
    p.add_argument("input")
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    params(p)
    p.add_argument("-o", default=".", help="output directory")
    p.add_argument("--dot", action="store_true", help="also dump the labelled graph as DOT")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="decide an instance bundle")
    p.add_argument("bundle", help="bundle stem or any of its .gr/.td/.json files")
    p.add_argument("--oracle", choices=("dp", "brute"), default="dp")
    p.add_argument("--witness", action="store_true", help="write the solution as <name>.sol.json")
    p.add_argument("-o", default=None, help="directory for the witness file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="reduce, solve and cross-check a formula for several problems")
    p.add_argument("input")
    p.add_argument("--problem", choices=PROBLEMS, action="append", help="repeatable; default all")
    params(p)
    p.add_argument("--json", help="write the report as JSON (timings omitted, so the file is deterministic)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="gadget, oracle and round-trip suites")
    p.add_argument("--seed", type=_seed, default=suites.DEFAULT_SEED)
    p.add_argument("--json", help="write the report as JSON")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SethForgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
