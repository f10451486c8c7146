import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from qdt import cli, schemas
from qdt.cli import RunPlan, UsageError, execute, main, parse_args

GOLDEN = Path(__file__).parent / "golden"

EXAMPLES = [
    (["analyze", "--alg", "merge", "--n", "4"], "analyze_merge_4.json"),
    (["check", "--suite", "covaluation", "--n", "3"], "check_covaluation_3.json"),
    (["lattice", "--leaves", "7"], "lattice_7.json"),
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_analyze():
    plan = parse_args(["analyze", "--alg", "merge", "--n", "4"])
    assert plan == RunPlan(command="analyze", n=4, alg="merge")


def test_parse_topo_seq():
    plan = parse_args(["topo", "--seq", "⟨1,3,3,4,4,4,4⟩"])
    assert plan.seq == "⟨1,3,3,4,4,4,4⟩" and plan.orientation == "root-as-bottom"


@pytest.mark.parametrize("argv", [
    ["analyze", "--alg", "bubble", "--n", "4"],
    ["analyze", "--alg", "merge", "--n", "9"],
    ["analyze", "--alg", "merge", "--n", "0"],
    ["enumerate", "--leaves", "0"],
    ["lattice", "--leaves", "25"],
    ["topo", "--seq", "⟨1,2⟩"],
    ["topo", "--seq", "⟨1,1⟩", "--alg", "merge", "--n", "3"],
    ["topo", "--alg", "merge"],
    ["topo", "--seq", "⟨1,x⟩"],
    ["check", "--suite", "nothing", "--n", "3"],
    ["check", "--suite", "lattice", "--n", "3", "--sample", "0"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(UsageError):
        parse_args(argv)
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and "usage error" in err


def test_env_bound(monkeypatch, capsys):
    monkeypatch.setenv("QDT_MAX_N", "3")
    assert run(["analyze", "--alg", "merge", "--n", "4"], capsys)[0] == 2
    monkeypatch.setenv("QDT_MAX_N", "9")
    assert parse_args(["analyze", "--alg", "merge", "--n", "9"]).n == 9


def test_topo_node_cap(capsys):
    code, _, err = run(["topo", "--alg", "insertion", "--n", "4"], capsys)
    assert code == 2 and "31" in err


@pytest.mark.parametrize("argv, name", EXAMPLES)
def test_golden(argv, name, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text(encoding="utf-8")


def test_analyze_example_payload():
    p = execute(parse_args(["analyze", "--alg", "merge", "--n", "4"])).payload
    assert (p["worst"], p["average"], p["epl"]) == (5, "14/3", 112)
    assert p["profile"] == [4] * 8 + [5] * 16


def test_check_example_verdicts():
    rep = execute(parse_args(["check", "--suite", "covaluation", "--n", "3"]))
    assert rep.exit_code == 0 and all(v["verdict"] == "pass" for v in rep.verdicts)
    assert {"star:insertion:3", "star:merge:3"} <= {v["name"] for v in rep.verdicts}


def test_lattice_example_payload():
    p = execute(parse_args(["lattice", "--leaves", "7"])).payload
    assert p["antisymmetry_witnesses"] == [["⟨1,3,3,4,4,4,4⟩", "⟨2,2,2,3,4,5,5⟩"]]
    assert p["quotient_lattice"] == "pass"
    assert [c["epl"] for c in p["classes"] if len(c["members"]) == 2] == [23]


def test_failing_property_exits_one(monkeypatch, capsys):
    def broken(plan):
        from qdt.treecore import CheckResult
        return {"n": 1, "count": 0, "sequences": []}, [("x", CheckResult.failed("x", (0,), 1, 2))], None

    monkeypatch.setitem(cli._RUNNERS, "enumerate", broken)
    code, out, _ = run(["enumerate", "--leaves", "3"], capsys)
    assert code == 1
    v = json.loads(out)["verdicts"][0]
    assert v["verdict"] == "fail" and v["lhs"] == "1/1" and v["rhs"] == "2/1"


def test_enumerate_json_and_csv(capsys):
    code, out, _ = run(["enumerate", "--leaves", "5"], capsys)
    data = json.loads(out)
    assert code == 0 and data["payload"]["count"] == 3
    code, out, _ = run(["enumerate", "--leaves", "5", "--format", "csv"], capsys)
    lines = out.split("\n")
    assert lines[0] == "index,sequence,epl,kraft" and len(lines) == 5 and lines[-1] == ""
    assert "\r" not in out


def test_topo_payload(capsys):
    code, out, _ = run(["topo", "--seq", "<1,3,3,4,4,4,4>"], capsys)
    p = json.loads(out)["payload"]
    assert code == 0
    assert p["recovered"] == [1, 3, 3, 4, 4, 4, 4] and len(p["maximal"]) == 7
    assert p["base_check"] == "fail"
    code, out, _ = run(["topo", "--seq", "<1,1>", "--orientation", "root-as-top"], capsys)
    assert code == 0 and json.loads(out)["payload"]["orientation"] == "root-as-top"


def test_check_csv(capsys):
    code, out, _ = run(["check", "--suite", "topology", "--n", "3", "--format", "csv"], capsys)
    assert code == 0 and out.startswith("name,law,verdict,checked,witness\n")


def test_out_and_dot_files_are_deterministic(tmp_path, capsys):
    outs = []
    out, dot = tmp_path / "r.json", tmp_path / "r.dot"
    for _ in range(2):
        run(["analyze", "--alg", "insertion", "--n", "3", "--out", str(out), "--dot", str(dot)], capsys)
        outs.append((out.read_bytes(), dot.read_bytes()))
    assert outs[0] == outs[1]
    assert outs[0][1].startswith(b"digraph")


@pytest.mark.parametrize("argv", [
    ["lattice", "--leaves", "6", "--dot"],
    ["topo", "--seq", "<1,2,2>", "--dot"],
])
def test_dot_written(argv, tmp_path, capsys):
    path = tmp_path / "g.dot"
    assert run(argv + [str(path)], capsys)[0] == 0
    text = path.read_text(encoding="utf-8")
    assert text.startswith("digraph") and text.rstrip().endswith("}")


@pytest.mark.parametrize("argv", [
    ["enumerate", "--leaves", "6"],
    ["analyze", "--alg", "insertion", "--n", "5"],
    ["lattice", "--leaves", "5"],
    ["topo", "--seq", "<2,2,2,2>"],
    ["check", "--suite", "pmetric", "--n", "3"],
    ["check", "--suite", "semival", "--n", "1"],
])
def test_payloads_round_trip_through_schema(argv, capsys):
    code, out, _ = run(argv, capsys)
    data = json.loads(out)
    schemas.validate_report(data)
    assert cli.dumps(data) == out


def test_schema_rejects_bad_rational():
    rep = execute(parse_args(["analyze", "--alg", "merge", "--n", "3"])).to_json()
    rep["payload"]["average"] = "8/0"
    with pytest.raises(jsonschema.ValidationError):
        schemas.validate_report(rep)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qdt", "analyze", "--alg", "insertion", "--n", "3"],
                       capture_output=True, text=True, encoding="utf-8")
    assert r.returncode == 0 and json.loads(r.stdout)["payload"]["average"] == "8/3"
