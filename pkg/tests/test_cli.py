import json
from pathlib import Path

import pytest

from diagquartic import cli, verify
from diagquartic.verify import Report

GOLDEN = Path(__file__).parent / "golden"
KEYS = {"surface", "h_group", "local", "algebra", "profiles", "verdict", "theorem"}


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("coeffs,name", [(("1", "47", "-103", "-82297"), "analyze_counterexample"), (("1", "1", "1", "1"), "analyze_fermat")])
def test_analyze_json_matches_golden(capsys, coeffs, name):
    code, out = run(capsys, "analyze", *coeffs, "--json", "--jobs", "1")
    assert code == 0
    assert out == (GOLDEN / f"{name}.json").read_text()
    doc = json.loads(out)
    assert set(doc) == KEYS
    assert json.dumps(doc, sort_keys=True, indent=2) + "\n" == out


def test_counterexample_document(capsys):
    _, out = run(capsys, "analyze", "1", "47", "-103", "-82297", "--json", "--jobs", "1")
    doc = json.loads(out)
    assert doc["verdict"]["kind"] == "ObstructionToRationalPoints" and doc["verdict"]["total"] == "1/2"
    assert doc["local"]["result"] is True
    assert doc["h_group"] == {"order": 256, "meets_235": False}
    assert doc["algebra"]["f"] == [20, 611, -927, 0]
    assert {p["place"]: p["values"] for p in doc["profiles"]}["17"] == ["1/2"]
    assert doc["theorem"]["qualifying_primes"] == []


def test_vacuous_and_constant(capsys):
    _, out = run(capsys, "analyze", "1", "1", "1", "1", "--json", "--jobs", "1")
    doc = json.loads(out)
    assert doc["local"]["result"] is False and doc["verdict"]["vacuous"] and doc["algebra"] is None
    _, out = run(capsys, "analyze", "1", "1", "1", "-1", "--jobs", "1")
    assert "NoObstructionConstantZero" in out


def test_text_and_json_carry_the_same_facts(capsys):
    _, text = run(capsys, "analyze", "2", "3", "5", "-10", "--jobs", "1")
    _, raw = run(capsys, "analyze", "2", "3", "5", "-10", "--json", "--jobs", "1")
    doc = json.loads(raw)
    assert doc["verdict"]["summary"] in text
    assert f"order {doc['h_group']['order']}" in text
    for pr in doc["profiles"]:
        assert "{" + ", ".join(pr["values"]) + "}" in text
    for place in doc["local"]["places"]:
        assert f" {place}  " in text


def test_normalization_is_reported(capsys):
    _, out = run(capsys, "analyze", "16", "752", "-1648", "-1316752", "--json", "--jobs", "1")
    doc = json.loads(out)
    assert doc["surface"]["input"] == [16, 752, -1648, -1316752]
    assert doc["surface"]["normalized"] == [1, 47, -103, -82297]


@pytest.mark.parametrize("argv", [
    ["analyze", "1", "0", "1", "1"],
    ["analyze", "1", "x", "1", "1"],
    ["analyze", "1", "2", "3"],
    ["analyze", "1", "2", "3", "4", "--jobs", "0"],
    ["find-family", "--max-prime", "2"],
    ["verify-paper", "--max-p", "abc"],
    [],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_find_family(capsys):
    code, out = run(capsys, "find-family", "--max-prime", "103", "--jobs", "1")
    assert code == 0
    assert "103    47  Accepted  <- first accepted" in out
    code, out = run(capsys, "find-family", "--max-prime", "70", "--jobs", "1")
    assert "47    67  RejectedLocal(2)" in out and "no accepted pairs" in out
    code, out = run(capsys, "find-family", "--max-prime", "3", "--jobs", "1")
    assert code == 0 and "no candidate pairs" in out


def test_verification_command_exit_codes(capsys, monkeypatch):
    good = Report("stub", "a claim", True)
    bad = Report("stub", "the quoted claim", False, mismatches=["something differs"])
    monkeypatch.setattr(verify, "run_all", lambda max_p, jobs: [good])
    code, out = run(capsys, "verify-paper", "--jobs", "1")
    assert code == 0 and "all reproductions consistent" in out
    monkeypatch.setattr(verify, "run_all", lambda max_p, jobs: [good, bad])
    code, out = run(capsys, "verify-paper", "--jobs", "1")
    assert code == 1 and "the quoted claim" in out and "something differs" in out


def test_verification_command_with_corrupted_table(capsys, monkeypatch):
    monkeypatch.setattr(verify, "POINTLESS_CURVES", {5: {(1, 1, 1)}})
    code, out = run(capsys, "verify-paper", "--max-p", "41", "--jobs", "1")
    assert code == 1
    assert "[MISMATCH] pointless quartic curves" in out
    assert verify.POINTLESS_CLAIM in out


def test_verification_command_real_run(capsys):
    code, out = run(capsys, "verify-paper", "--max-p", "41", "--jobs", "1")
    # only the tangent-form sweep disagrees with its recorded claim
    mismatched = [line for line in out.splitlines() if line.startswith("[MISMATCH]")]
    assert mismatched == [line for line in mismatched if "tangent-form both-values sweep" in line]
    assert code == (1 if mismatched else 0)
