import json

import pytest

from sethforge.bundle import read_bundle, read_solution
from sethforge.cli import main
from sethforge.instance import check_solution


@pytest.fixture
def cnf(tmp_path):
    def make(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return make


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reduce_is(cnf, tmp_path, capsys):
    phi = cnf("phi.cnf", "p cnf 1 1\n1 1 0\n")
    code, _, _ = run(capsys, "reduce", "--problem", "is", phi, "-o", str(tmp_path / "out"))
    assert code == 0
    assert (tmp_path / "out/phi.gr").read_text().startswith("p tw 20 ")
    assert json.loads((tmp_path / "out/phi.json").read_text())["target"] == 10


def test_reduce_solve_ds_and_lowered_target(cnf, tmp_path, capsys):
    phi = cnf("phi.cnf", "p cnf 2 1\n1 -2 0\n")
    out = tmp_path / "out"
    run(capsys, "reduce", "--problem", "ds", "--p", "1", phi, "-o", str(out))
    assert json.loads((out / "phi.json").read_text())["target"] == 21
    code, text, _ = run(capsys, "solve", str(out / "phi"), "--witness")
    assert code == 0 and text.splitlines()[0] == "yes 21"
    inst = read_bundle(out / "phi")
    assert check_solution(inst, read_solution(out / "phi.sol.json"))
    doc = json.loads((out / "phi.json").read_text())
    doc["target"] = 20
    (out / "phi.json").write_text(json.dumps(doc))
    assert run(capsys, "solve", str(out / "phi.json"))[1].strip() == "no 21"


def test_brute_oracle_cap_error(cnf, tmp_path, capsys):
    phi = cnf("phi.cnf", "p cnf 2 1\n1 -2 0\n")
    run(capsys, "reduce", "--problem", "ds", phi, "-o", str(tmp_path))
    code, _, err = run(capsys, "solve", str(tmp_path / "phi"), "--oracle", "brute")
    assert code == 2 and err.startswith("error: cap-exceeded: ")


def test_degenerate_input(cnf, capsys):
    code, _, err = run(capsys, "reduce", "--problem", "is", cnf("empty.cnf", "p cnf 1 0\n"))
    assert code == 2 and err.startswith("error: degenerate-input: ")


def test_parse_error_and_missing_file(cnf, tmp_path, capsys):
    code, _, err = run(capsys, "reduce", "--problem", "is", cnf("bad.cnf", "p cnf 1 1\n2 0\n"))
    assert code == 2 and err.startswith("error: parse: variable-range: ")
    code, _, err = run(capsys, "reduce", "--problem", "is", str(tmp_path / "nope.cnf"))
    assert code == 2 and err.startswith("error: io: ")


def test_invalid_bundle(cnf, tmp_path, capsys):
    phi = cnf("phi.cnf", "p cnf 1 1\n1 0\n")
    run(capsys, "reduce", "--problem", "is", phi, "-o", str(tmp_path))
    (tmp_path / "phi.td").write_text("s td 1 1 20\nb 1 1\n")
    code, _, err = run(capsys, "solve", str(tmp_path / "phi"))
    assert code == 2 and err.startswith("error: invalid-bundle: ")


def test_oct_above_budget_prints_bound(cnf, tmp_path, capsys):
    phi = cnf("phi.cnf", "p cnf 1 1\n1 0\n")
    run(capsys, "reduce", "--problem", "oct", phi, "-o", str(tmp_path))
    doc = json.loads((tmp_path / "phi.json").read_text())
    doc["target"] = 1
    (tmp_path / "phi.json").write_text(json.dumps(doc))
    assert run(capsys, "solve", str(tmp_path / "phi"))[1].strip() == "no >1"


@pytest.mark.parametrize("problem", ["is", "ds", "maxcut", "qcol", "oct", "packing", "partition"])
def test_outputs_are_byte_deterministic(cnf, tmp_path, capsys, problem):
    phi = cnf("phi.cnf", "p cnf 2 2\n1 -2 0\n2 0\n")
    for d in ("a", "b"):
        run(capsys, "reduce", "--problem", problem, phi, "-o", str(tmp_path / d), "--dot")
    for ext in ("gr", "td", "json", "dot"):
        assert (tmp_path / "a" / f"phi.{ext}").read_bytes() == (tmp_path / "b" / f"phi.{ext}").read_bytes()


def test_verify_examples(cnf, tmp_path, capsys):
    sat = cnf("sat.cnf", "p cnf 2 1\n1 -2 0\n")
    code, text, _ = run(capsys, "verify", sat, "--json", str(tmp_path / "r.json"))
    assert code == 0 and "PASS" in text
    doc = json.loads((tmp_path / "r.json").read_text())
    rows = {r["kind"]: r for r in doc["rows"]}
    assert rows["PartitionIntoTriangles"]["status"] == "experimental-skip"
    assert all(r["agree"] for k, r in rows.items() if k != "PartitionIntoTriangles")
    assert "partition_check" in doc
    unsat = cnf("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n")
    run(capsys, "verify", unsat, "--json", str(tmp_path / "u.json"))
    doc = json.loads((tmp_path / "u.json").read_text())
    assert doc["pass"] and all(r["sat_verdict"] is False for r in doc["rows"])
