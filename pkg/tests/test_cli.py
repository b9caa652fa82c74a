import io
import json
import subprocess
import sys

import pytest

from coverings.cli import EXIT_CAPACITY, EXIT_FAILED, EXIT_INPUT, EXIT_OK, main


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mycielski(capsys):
    code, out, _ = run(["mycielski", "12"], capsys)
    assert code == EXIT_OK and out.strip() == "f(12) = 4"


def test_mycielski_json(capsys):
    code, out, _ = run(["mycielski", "12", "--format", "json"], capsys)
    assert json.loads(out) == {"n": 12, "f": 4}


def test_divides(capsys):
    assert run(["divides", "4", "2", "4"], capsys)[1].strip() == "NO (p=2: 3/2 < 2)"
    assert run(["divides", "6", "2", "3", "3"], capsys)[1].strip() == "YES"
    payload = json.loads(run(["divides", "4", "2", "4", "--format", "json"], capsys)[1])
    assert payload["per_prime"]["2"] == {"sum": "3/2", "ord_p(n)": 2}


def test_divides_bad_order(capsys):
    assert run(["divides", "4", "1"], capsys)[0] == EXIT_INPUT


def test_minimal_k(capsys):
    code, out, _ = run(["minimal-k", "12"], capsys)
    assert code == EXIT_OK and "f(12) = 4" in out and "2 2 3 3" in out


def construct(capsys, *params):
    code, out, _ = run(["construct", *params], capsys)
    assert code == EXIT_OK
    return out


def test_construct_extremal_pipes_into_verify_z(capsys, monkeypatch):
    text = construct(capsys, "extremal-z", "4", "2")
    assert json.loads(text) == {"type": "Z", "m": 2, "classes": [[0, 1], [1, 2], [2, 4], [0, 4]]}
    code, out, _ = run(["verify-z", "-", "--m", "2", "--format", "json"], capsys, stdin=text, monkeypatch=monkeypatch)
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["summary"]["exact"] is True
    a0 = payload["reports"][0]
    assert a0["details"]["N_a"] == 4
    assert any(w["inequality"] == "k >= m + f(N_a)" and w["lhs"] == 4 and w["rhs"] == 4 for w in a0["witnesses"])


@pytest.mark.parametrize(
    "params, verb",
    [
        (["extremal-z", "5", "1"], "verify-z"),
        (["extremal-z", "6", "3"], "verify-z"),
        (["cpcp", "3"], "verify-group"),
        (["partition", "8"], "verify-group"),
        (["partition", "2", "4", "--H", "0,2"], "verify-group"),
    ],
)
def test_round_trip(capsys, monkeypatch, params, verb):
    text = construct(capsys, *params)
    code, _, _ = run([verb, "-"], capsys, stdin=text, monkeypatch=monkeypatch)
    assert code == EXIT_OK


def test_verify_group_with_K(capsys, monkeypatch, tmp_path):
    path = tmp_path / "cp.json"
    path.write_text(construct(capsys, "cpcp", "2"))
    code, out, _ = run(["verify-group", str(path), "--m", "1", "--K", "1,0;0,1", "--a", "1,0"], capsys)
    assert code == EXIT_OK and "corollary-1.1: PASS" in out


def test_verify_group_not_a_cover(capsys, monkeypatch):
    text = construct(capsys, "partition", "2", "2")
    code, _, err = run(["verify-group", "-", "--m", "2"], capsys, stdin=text, monkeypatch=monkeypatch)
    assert code == EXIT_INPUT and "not a 2-cover" in err


def test_verify_z_not_a_cover(capsys, tmp_path):
    path = tmp_path / "z.json"
    path.write_text(json.dumps({"type": "Z", "m": 1, "classes": [[0, 2], [1, 4]]}))
    assert run(["verify-z", str(path)], capsys)[0] == EXIT_INPUT


def test_verify_z_capacity(capsys, tmp_path):
    path = tmp_path / "z.json"
    path.write_text(json.dumps({"type": "Z", "m": 1, "classes": [[0, 1009], [0, 1013], [0, 1]]}))
    assert run(["verify-z", str(path)], capsys)[0] == EXIT_CAPACITY


def test_missing_file(capsys):
    assert run(["verify-z", "/nonexistent.json"], capsys)[0] == EXIT_INPUT


def test_characters(capsys, monkeypatch):
    text = construct(capsys, "partition", "8", "--H", "4")
    code, out, _ = run(["characters", "-", "--a", "0", "--format", "json"], capsys, stdin=text, monkeypatch=monkeypatch)
    payload = json.loads(out)
    assert code == EXIT_OK and payload["verdict"] == "pass"
    residual = [w for w in payload["reports"][0]["witnesses"] if w["inequality"].startswith("max |Psi(x)|")][0]
    assert "e" in residual["lhs"]  # scientific notation


def test_characters_on_z_system(capsys, monkeypatch):
    text = construct(capsys, "extremal-z", "4", "1")
    code, out, _ = run(["characters", "-", "--a", "-1", "--format", "json"], capsys, stdin=text, monkeypatch=monkeypatch)
    payload = json.loads(out)
    assert code == EXIT_OK and payload["verdict"] == "pass"
    assert payload["summary"]["group"] == "C8"


def test_search_bounds_json(capsys):
    code, out, _ = run(["search", "bounds", "--orders", "2", "2", "--max-k", "3", "--format", "json"], capsys)
    details = json.loads(out)["details"]
    assert code == EXIT_OK
    for key in ("systems_examined", "covers_found", "counterexamples", "tight_witnesses"):
        assert key in details
    assert details["counterexamples"] == 0


def test_search_gg_and_divisibility(capsys):
    code, out, _ = run(["search", "gg", "--orders", "2", "2", "2", "--format", "json"], capsys)
    assert code == EXIT_OK and json.loads(out)["details"]["k_min"] == 3
    code, out, _ = run(["search", "divisibility", "--orders", "30", "--format", "json"], capsys)
    payload = json.loads(out)
    assert code == EXIT_OK and payload["witnesses"][0]["lhs"] == 7
    assert len(payload["details"]["witness(30)"]) == 7
    code, out, _ = run(["search", "divisibility", "--max-order", "10", "--format", "json"], capsys)
    assert code == EXIT_OK and len(json.loads(out)["witnesses"]) == 9


def test_search_capacity(capsys):
    assert run(["search", "bounds", "--orders", "128"], capsys)[0] == EXIT_CAPACITY


def test_failed_check_exit_code(capsys, monkeypatch):
    from coverings import abgroup
    from coverings.report import BoundReport

    def broken(system, m):
        r = BoundReport("theorem-1.3")
        r.add(0, "k >= m + f(N_a)", 1, 2)
        return r

    monkeypatch.setattr(abgroup, "check_theorem_1_3", broken)
    text = construct(capsys, "cpcp", "2")
    code, _, _ = run(["verify-group", "-"], capsys, stdin=text, monkeypatch=monkeypatch)
    assert code == EXIT_FAILED


def test_reports_are_byte_identical():
    cmd = [sys.executable, "-m", "coverings", "search", "bounds", "--orders", "2", "3", "--max-k", "3", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second


def test_shell_pipeline():
    construct_cmd = [sys.executable, "-m", "coverings", "construct", "extremal-z", "4", "2"]
    system = subprocess.run(construct_cmd, capture_output=True, check=True).stdout
    verify = subprocess.run([sys.executable, "-m", "coverings", "verify-z", "-", "--m", "2"], input=system, capture_output=True)
    assert verify.returncode == 0 and b"PASS" in verify.stdout
