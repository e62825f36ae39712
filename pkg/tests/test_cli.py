import json
import subprocess
import sys

import pytest

from ceppa import cli
from ceppa.gradealg import b_presentation, preprojective_presentation
from ceppa.report import SCHEMA, VerificationReport, strip_volatile
from ceppa.rootsys import build_cartan


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_json(capsys):
    code, out, _ = run(capsys, "roots", "--type", "D", "--rank", "4", "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["h"] == 6 and data["N"] == 12
    assert data["exponents"] == [1, 3, 3, 5]


def test_roots_text(capsys):
    code, out, _ = run(capsys, "roots", "--type", "a", "--rank", "2")
    assert code == 0
    assert "# N\t3" in out


def test_verify_pass_and_json_round_trip(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", "3", "--suite", "all", "--json", str(path))
    assert code == 0
    assert "# verdict pass" in out
    data = json.loads(path.read_text())
    assert data["schema"] == SCHEMA
    assert data["verdict"] == "pass"
    assert "t_operator" in data["conventions"]
    report = VerificationReport.from_dict(data)
    assert json.loads(report.to_json()) == data
    names = {c["name"] for c in data["checks"]}
    assert {"trace_unique", "membership_triangle", "w_lambda_equivalence[0]"} <= names


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--type", "D", "--rank", "4", "--mu", "random", "--seed", "3", "--json", "-"]
    a = json.loads(run(capsys, *argv)[1])
    b = json.loads(run(capsys, *argv)[1])
    assert strip_volatile(a) == strip_volatile(b)
    assert "timestamp" not in strip_volatile(a)


def test_verify_budget_skip(capsys):
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", "4", "--suite", "algebra", "--budget", "10",
                       "--json", "-")
    data = json.loads(out)
    assert code == 0
    assert data["summary"]["skipped"] >= 1
    assert all(c["reason"] for c in data["checks"] if c["status"] == "skipped")


def test_verify_failure_exit_code(capsys, monkeypatch):
    import ceppa.verify as verify

    def broken(*args, **kwargs):
        raise RuntimeError("injected")

    monkeypatch.setattr(verify, "build_nilpotent", broken)
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", "2", "--suite", "lie")
    assert code == 1
    assert "FAIL\tlie\tnilpotent_structure" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--type", "E", "--rank", "9"],
        ["verify", "--type", "A", "--rank", "2", "--mu", "1,-1"],
        ["trace", "--type", "A", "--rank", "3", "--mu", "1,2"],
        ["membership", "--type", "A", "--rank", "3", "--phi", "1,2", "--s", "1"],
        ["membership", "--type", "A", "--rank", "3", "--phi", "1,2,3", "--s", "-1"],
        ["build", "--type", "A", "--rank", "3", "--algebra", "B"],
        ["build", "--presentation-file", "/nonexistent", "--max-degree", "2"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("ceppa:")


def test_argparse_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--type", "B", "--rank", "3"])
    assert exc.value.code == 2


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "--type", "A", "--rank", "3", "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["algebra_side"] == ["1/2", "-1", "1/2"]
    assert data["agree"]


def test_trace_budget_skips_algebra(capsys):
    code, out, _ = run(capsys, "trace", "--type", "E", "--rank", "6")
    assert code == 0
    assert "algebra side skipped" in out


@pytest.mark.parametrize("phi,s,expected", [("1,-2,1", 1, False), ("1,-1,1", 1, True), ("2,-2,2", 1, True), ("1,0,0", 3, True)])
def test_membership(capsys, phi, s, expected):
    code, out, _ = run(capsys, "membership", "--type", "A", "--rank", "3", "--phi", phi, "--s", str(s), "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["agree"]
    assert data["in_commutator"] is expected


def test_build_variants(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "--type", "A", "--rank", "2", "--json", "-")
    assert code == 0
    assert json.loads(out)["dims"] == [2, 2, 2, 0, 0]
    code, out, _ = run(capsys, "build", "--type", "D", "--rank", "4", "--algebra", "B", "--eliminate", "--json", "-")
    assert json.loads(out)["dims"][:9] == [1, 0, 3, 0, 4, 0, 3, 0, 1]
    f = tmp_path / "p.txt"
    f.write_text(preprojective_presentation(build_cartan("A", 3), include_z=False).to_text())
    code, out, _ = run(capsys, "build", "--presentation-file", str(f), "--max-degree", "3", "--json", "-")
    assert code == 0
    assert json.loads(out)["dims"] == [3, 4, 3, 0]


def test_dump_presentation(capsys):
    code, out, _ = run(capsys, "build", "--type", "D", "--rank", "4", "--algebra", "B", "--dump-presentation")
    assert code == 0
    assert out == b_presentation((1, 1, 1)).to_text()


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "ceppa.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip().endswith("0.1.0")
