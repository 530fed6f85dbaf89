import json
import re
import subprocess
import sys

import pytest

from hdepthkit.cli import main

PATRU = "x1x2,x1x3,x1x4,x1x5x6"
MINUS = ["--n", "13", "--intersect", "(x1)", "(x2,...,x13)"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def numbers(text):
    return re.findall(r"-?\d+", text)


def test_hdepth_patru_both(capsys):
    code, out, _ = run(capsys, "hdepth", "--n", "6", PATRU, "--mode", "both", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["quotient"]["hdepth"] == 4 and data["ideal"]["hdepth"] == 4
    assert data["quotient"]["alpha"] == [1, 6, 12, 10, 5, 1, 0]
    assert data["quotient"]["beta_at_hdepth"] == [1, 2, 0, 0, 2]
    assert {"q": 5, "k": 2, "beta": -2} in data["quotient"]["rejected"]
    assert data["compare"]["at_least"] is True and data["compare"]["strict_plus_one"] is False


def test_hdepth_single_mode_schema(capsys):
    code, out, _ = run(capsys, "hdepth", "--n", "6", PATRU, "--json")
    data = json.loads(out)
    for key in ("n", "mode", "alpha", "hdepth", "dim", "beta_at_hdepth", "rejected", "compare"):
        assert key in data
    assert set(data["compare"]) >= {"at_least", "strict_plus_one"}


def test_hdepth_minus_intersection(capsys):
    code, out, _ = run(capsys, "hdepth", *MINUS, "--mode", "both")
    assert code == 0
    assert "hdepth(S/I) = 8" in out and "hdepth(I) = 7" in out


@pytest.mark.parametrize("argv", [
    ["hdepth", "--n", "6", PATRU, "--mode", "both"],
    ["hdepth", *MINUS, "--mode", "both"],
    ["hdepth", "x1^2*x2, x2^3", "--mode", "both"],
    ["hdepth", "--n", "4", "x1x2", "--over", "x1, x2"],
    ["alpha", "--n", "6", PATRU, "--mode", "both"],
    ["beta", "--q", "5", "--n", "6", PATRU, "--mode", "both"],
    ["compare", *MINUS],
    ["polarize", "x1^3*x2, x2^2"],
])
def test_text_numbers_appear_in_json(capsys, argv):
    code, text, _ = run(capsys, *argv)
    code_j, js, _ = run(capsys, *argv, "--json")
    assert code == code_j == 0
    available = set(numbers(js))
    missing = [x for x in numbers(text) if x not in available]
    assert not missing


def test_json_is_byte_deterministic(capsys):
    first = run(capsys, "hdepth", *MINUS, "--mode", "both", "--json")[1]
    second = run(capsys, "hdepth", *MINUS, "--mode", "both", "--json")[1]
    assert first == second


def test_unit_ideal_is_domain_error(capsys):
    code, _, err = run(capsys, "hdepth", "--n", "3", "1")
    assert code == 3 and "proper" in err
    code, _, err = run(capsys, "hdepth", "--n", "3", "0")
    assert code == 3 and "nonzero" in err


def test_parse_and_usage_errors(capsys):
    assert run(capsys, "hdepth", "x1 + x2")[0] == 2
    assert run(capsys, "hdepth", "--n", "2", "x5")[0] == 2
    assert run(capsys, "hdepth")[0] == 2  # no ideal given
    assert run(capsys, "hdepth", "x1", "--over", "x1,x2", "--mode", "both")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_file_input(tmp_path, capsys):
    f = tmp_path / "patru.txt"
    f.write_text("# Example ideal\nx1x2, x1x3\nx1x4\nx1x5x6  # last one\n")
    code, out, _ = run(capsys, "hdepth", "--file", str(f), "--json")
    assert code == 0 and json.loads(out)["hdepth"] == 4
    assert run(capsys, "hdepth", "--file", str(tmp_path / "missing.txt"))[0] == 2


def test_over_quotient(capsys):
    code, out, _ = run(capsys, "alpha", "--n", "3", "x1x2", "--over", "x1, x2", "--json")
    assert code == 0 and json.loads(out)["alpha"] == [0, 2, 2, 0]


def test_beta_range(capsys):
    assert run(capsys, "beta", "--q", "9", "--n", "6", PATRU)[0] == 3


def test_search_streams_findings(tmp_path, capsys):
    spec = tmp_path / "m3.spec"
    spec.write_text("n = 10\npredicate = beta_exceeds\nq = 7\nk = 5\nbound = 21\n"
                    "fixed = 1:10, 2:45, 3:120\nupper = 8:0\nmax_findings = 2\n")
    code, out, err = run(capsys, "search", str(spec))
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[0]["alpha"][:8] == [1, 10, 45, 120, 197, 216, 155, 70]
    assert "nodes" in err and "pruned" in err


def test_search_empty_at_n7(tmp_path, capsys):
    spec = tmp_path / "n7.spec"
    spec.write_text('{"n": 7, "predicate": "hdepth_ideal_lt_quotient"}')
    code, out, err = run(capsys, "search", str(spec), "--json", "--threads", "2")
    assert code == 0 and out == ""
    assert json.loads(err)["summary"]["complete"] is True


def test_search_budget_exhaustion_is_not_an_error(tmp_path, capsys):
    spec = tmp_path / "b.spec"
    spec.write_text("n = 9\nq_range = 3\nnode_budget = 20\n")
    code, out, err = run(capsys, "search", str(spec))
    assert code == 0 and out == "" and "budget exhausted" in err


def test_search_bad_spec(tmp_path, capsys):
    spec = tmp_path / "bad.spec"
    spec.write_text("n = 10\npredicate = whatever\n")
    assert run(capsys, "search", str(spec))[0] == 2
    assert run(capsys, "search", str(tmp_path / "nope.spec"))[0] == 2


def test_verify_paper_filter_and_scale(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "example:minus3")
    assert code == 0
    assert out.count("PASS") == 1 and "example:minus3" in out
    code, out, _ = run(capsys, "verify-paper", "--only", "sweep:n6", "--scale", "n6=exhaustive", "--json")
    assert code == 0
    rows = [json.loads(x) for x in out.splitlines()]
    assert rows[0]["check"] == "sweep:n6" and rows[0]["passed"]
    assert rows[0]["detail"].startswith("all 551 feasible")
    assert run(capsys, "verify-paper", "--scale", "n6")[0] == 2
    assert run(capsys, "verify-paper", "--only", "nothing-matches")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hdepthkit", "alpha", "x1x2", "--json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["alpha"] == [1, 2, 0]
