import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from zpsym.cli import main
from zpsym.defects import defect_point, group_defect
from zpsym.gsig import GroupCensus
from zpsym.formats import format_fixed_point_data


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    return json.loads(out)


def test_defect_json(capsys):
    doc = run_json(capsys, "defect", "--p", "5", "--q", "-1")
    assert doc == {"schema": "zpsym.defect/1", "p": 5, "q": -1, "value": "4"}


def test_defect_paths(capsys):
    assert run_json(capsys, "defect", "--p", "7", "--q", "3", "--path", "dedekind")["value"] == str(defect_point(7, 3))
    oracle = run_json(capsys, "defect", "--p", "7", "--q", "-2", "--path", "oracle")
    assert abs(float(oracle["value"]) - 2) < 1e-9
    assert run_json(capsys, "defect", "--p", "5", "--selfint", "-2")["value"] == "-16"


def test_defect_batch(capsys, tmp_path):
    f = tmp_path / "pairs.txt"
    f.write_text("5 -1\n5 1\n# comment\n3 1\n")
    doc = run_json(capsys, "defect", "--batch", str(f))
    assert [r["value"] for r in doc["rows"]] == ["4", "-4", "-2/3"]


def test_json_round_trips_recomputation(capsys):
    for p, q in [(5, 2), (11, 3), (13, -4), (97, 45)]:
        doc = run_json(capsys, "defect", "--p", str(p), "--q", str(q))
        assert Fraction(doc["value"]) == defect_point(doc["p"], doc["q"])
    doc = run_json(capsys, "group-defect", "--type", "3", "--p", "5")
    assert Fraction(doc["value"]) == group_defect(3, 5) == -8


def test_dedekind(capsys):
    assert run_json(capsys, "dedekind", "--q", "1", "--p", "3")["value"] == "1/18"


def test_domain_errors_exit_one(capsys):
    code, _, err = run(capsys, "defect", "--p", "5", "--q", "10")
    assert code == 1 and "divisible" in err
    code, _, err = run(capsys, "group-defect", "--type", "2", "--p", "5")
    assert code == 1 and "cannot occur" in err
    code, _, _ = run(capsys, "component-data", "--component", "II", "--p", "3")
    assert code == 1


def test_usage_errors_exit_two(capsys, monkeypatch):
    code, _, _ = run(capsys, "classify", "--graph", "-", stdin="", monkeypatch=monkeypatch)
    assert code == 2
    code, _, _ = run(capsys, "defect", "--p", "5")
    assert code == 2
    code, _, _ = run(capsys, "residual", "--data", "/nonexistent/file", "--sign-M", "-16")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["defect", "--p", "five"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_residual(capsys, tmp_path):
    f = tmp_path / "data.txt"
    f.write_text(format_fixed_point_data(GroupCensus.of(d3=8).expand(5)))
    doc = run_json(capsys, "residual", "--data", str(f), "--sign-M", "-16")
    assert doc["residual"] == "0" and doc["consistent"] and doc["fixed_euler"] == 24


def test_solve_and_scan(capsys):
    doc = run_json(capsys, "solve", "--p", "5", "--sign", "-16")
    assert doc["solutions"] == [[0, 0, 8, 0]] and not doc["forced_trivial"]
    doc = run_json(capsys, "scan", "--p-max", "50", "--sign", "-16")
    forced = [r["p"] for r in doc["rows"] if r["forced_trivial"]]
    assert {11, 23, 47} <= set(forced) and 5 not in forced
    code, _, _ = run(capsys, "scan", "--p-max", "5000")
    assert code == 1


def test_classify(capsys, monkeypatch):
    code, out, _ = run(capsys, "classify", "--graph", "-", stdin="c a\nc b\nc d\nc e\n", monkeypatch=monkeypatch)
    assert code == 0 and out.strip() == "D-tilde(4) multiplicities (2, 1, 1, 1, 1)"
    code, out, _ = run(capsys, "classify", "--family", "D", "--n", "4", "--dot")
    assert code == 0 and out.startswith('graph "plumbing"')
    doc = run_json(capsys, "classify", "--family", "A", "--n", "1")
    assert doc["kind"] == "A-tilde(1)" and doc["multiplicities"] == [1, 1]


def test_plumb(capsys):
    assert run_json(capsys, "plumb", "transfer", "--i", "1")["matrix"] == [[-1, 0], [2, 1]]
    assert run_json(capsys, "plumb", "dtilde", "--n", "9", "--p", "5")["holds"]
    assert not run_json(capsys, "plumb", "cycle", "--u", "1", "--v", "1", "--k", "3", "--p", "5")["holds"]
    assert run_json(capsys, "plumb", "sequences", "--p", "5", "--k", "5")["sequences"] == [[4] * 5]


def test_component_data(capsys):
    doc = run_json(capsys, "component-data", "--component", "II", "--p", "7")
    pts = doc["alternatives"][0]["points"]
    assert [p["rotations"][0] for p in pts] == [[2, 3], [1, 1]]


def test_scenario_exit_codes(capsys):
    code, out, _ = run(capsys, "scenario", "example-3.10", "--case", "p5-atilde4")
    assert code == 0 and out.rstrip().endswith("LHS -64 != RHS 56: CONTRADICTION")
    code, out, _ = run(capsys, "scenario", "theorem-a", "--p", "7")
    assert code == 0 and "CONTRADICTION" in out
    code, _, _ = run(capsys, "scenario", "example-3.9")
    assert code == 0
    # the broken control's expected verdict is a contradiction, which is reproduced
    code, out, _ = run(capsys, "scenario", "example-3.9", "--census", "0,0,7,0")
    assert code == 0 and out.rstrip().endswith("CONTRADICTION")
    code, _, _ = run(capsys, "scenario", "example-3.10")
    assert code == 2


def test_output_is_deterministic(capsys):
    argvs = [
        ["scan", "--p-max", "100", "--format", "json"],
        ["scenario", "example-3.10", "--case", "p3", "--format", "json"],
        ["reproduce-all", "--format", "json"],
    ]
    for argv in argvs:
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zpsym", "defect", "--p", "5", "--q", "-1"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "I(5,-1) = 4"


def test_unreproduced_scenario_exits_nonzero(capsys, monkeypatch):
    import zpsym.cli as cli
    from zpsym.scenarios import Verdict, example_310

    def flipped(case, p=None):
        report = example_310(case, p)
        report.expected = Verdict.CONSISTENT
        return report

    monkeypatch.setattr(cli, "example_310", flipped)
    code, _, _ = run(capsys, "scenario", "example-3.10", "--case", "p2")
    assert code == 1
