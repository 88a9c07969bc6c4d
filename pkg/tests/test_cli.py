import csv
import io
import json

import pytest

from offswitch_lab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_scenario_alice_basic(capsys):
    code, out, _ = run(capsys, "scenario", "alice-basic")
    assert code == 0
    lines = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert lines["eu_act"] == "10"
    assert lines["eu_defer"] == "18"
    assert lines["delta"] == "8"
    assert lines["best"] == "defer"


def test_scenario_alice_noisy_default_epsilon(capsys):
    code, out, _ = run(capsys, "scenario", "alice-noisy")
    assert code == 0
    lines = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert lines["epsilon"] == "0.02"
    assert lines["eu_act"] == "40"
    assert lines["eu_defer"] == "39.68"
    assert lines["eu_learn"] == "40"
    assert lines["best"] == "act"


def test_scenario_epsilon_flag_overrides(capsys):
    code, out, _ = run(capsys, "scenario", "alice-noisy", "--epsilon", "0")
    assert code == 0
    lines = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert lines["eu_defer"] == "40.5"
    assert lines["best"] == "defer"


def test_scenario_alice_confident_threshold(capsys):
    code, out, _ = run(capsys, "scenario", "alice-confident")
    assert code == 0
    lines = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert lines["eu_defer"] == "40.5"
    assert lines["threshold"].startswith("0.0121951")


def test_scenario_json_round_trips(capsys):
    code, out, _ = run(capsys, "scenario", "alice-confident", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["prior"] == {"kind": "uniform", "lo": -10.0, "hi": 90.0}
    assert payload["report"]["eu_defer"] == pytest.approx(40.5)
    assert payload["report"]["threshold_epsilon"] == pytest.approx(0.5 / 41)


def test_scenario_unknown_name_exits_2(capsys):
    code, _, err = run(capsys, "scenario", "alice-bold")
    assert code == 2
    assert "alice-bold" in err


def test_scenario_file_and_unknown_field_rejection(tmp_path, capsys):
    good = tmp_path / "custom.json"
    good.write_text(
        json.dumps(
            {
                "label": "custom",
                "prior": {"kind": "discrete", "atoms": [[-1.0, 0.5], [1.0, 0.5]]},
                "epsilon": 0.1,
            }
        )
    )
    code, out, _ = run(capsys, "scenario", str(good))
    assert code == 0
    assert "custom" in out

    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps({"label": "x", "prior": {"kind": "uniform", "lo": 0, "hi": 1}, "epsilon": 0, "bogus": 1})
    )
    code, _, err = run(capsys, "scenario", str(bad))
    assert code == 2
    assert "bogus" in err

    not_json = tmp_path / "broken.json"
    not_json.write_text("{not json")
    code, _, err = run(capsys, "scenario", str(not_json))
    assert code == 2


def test_scenario_file_with_rule_and_updater_blocks(tmp_path, capsys):
    path = tmp_path / "ruleful.json"
    path.write_text(
        json.dumps(
            {
                "label": "ruleful",
                "prior": {"kind": "uniform", "lo": -10, "hi": 90},
                "epsilon": 0.02,
                "rule": {"kind": "reu", "risk": {"kind": "power", "k": 2}},
                "updater": {"kind": "faulty", "q": 0.5, "mode": "complement-conditionalization"},
            }
        )
    )
    code, out, _ = run(capsys, "scenario", str(path), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rule_analysis"]["rule"] == "reu"
    assert payload["updater_analysis"]["rule"] == "faulty"

    code, out, _ = run(capsys, "scenario", str(path))
    assert code == 0
    assert "rule_value_learning" in out
    assert "updater_voi" in out


def test_sweep_bracket_of_the_crossover(capsys):
    code, out, _ = run(capsys, "sweep", "alice-confident", "--lo", "0", "--hi", "0.05", "--steps", "51")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 51
    assert list(rows[0]) == ["epsilon", "eu_act", "eu_defer", "eu_learn", "best"]
    flips = [
        (float(a["epsilon"]), float(b["epsilon"]))
        for a, b in zip(rows, rows[1:])
        if a["best"] != b["best"]
    ]
    assert len(flips) == 1
    lo, hi = flips[0]
    assert lo == pytest.approx(0.012)
    assert hi == pytest.approx(0.013)
    assert rows[0]["best"] == "defer" and rows[-1]["best"] == "act"


def test_sweep_learning_dominates_deference_in_every_row(capsys):
    code, out, _ = run(capsys, "sweep", "alice-basic", "--lo", "0", "--hi", "1", "--steps", "21")
    assert code == 0
    for row in csv.DictReader(io.StringIO(out)):
        assert float(row["eu_learn"]) >= float(row["eu_defer"]) - 1e-12


def test_sweep_bad_grid_exits_2(capsys):
    code, _, err = run(capsys, "sweep", "alice-basic", "--lo", "0.3", "--hi", "0.3", "--steps", "5")
    assert code == 2
    code, _, err = run(capsys, "sweep", "alice-basic", "--lo", "0", "--hi", "1", "--steps", "1")
    assert code == 2


def test_sweep_out_file_and_determinism(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "alice-confident", "--lo", "0", "--hi", "0.05", "--steps", "11", "--out", str(out_path))
    assert code == 0
    first = out_path.read_bytes()
    run(capsys, "sweep", "alice-confident", "--lo", "0", "--hi", "0.05", "--steps", "11", "--out", str(out_path))
    assert out_path.read_bytes() == first
    assert first.endswith(b"\n")
    assert b"\r" not in first


def test_check_good_and_theorem1(capsys):
    code, out, _ = run(capsys, "check", "good", "--trials", "500", "--seed", "7")
    assert code == 0
    assert "trials=500 violations=0 seed=7" in out
    code, out, _ = run(capsys, "check", "theorem1", "--trials", "500", "--seed", "7")
    assert code == 0
    assert "violations=0" in out


def test_check_zero_trials_exits_2(capsys):
    code, _, err = run(capsys, "check", "good", "--trials", "0")
    assert code == 2


def test_search_eu_rejected_with_explanation(capsys):
    code, _, err = run(capsys, "search", "--rule", "eu", "--trials", "10")
    assert code == 2
    assert "Good" in err


def test_search_stay_at_prior_rejected(capsys):
    code, _, err = run(capsys, "search", "--rule", "faulty:stay:0.5", "--trials", "10")
    assert code == 2


def test_search_bad_rule_string_exits_2(capsys):
    code, _, err = run(capsys, "search", "--rule", "reu:cubic", "--trials", "10")
    assert code == 2


def test_search_writes_witnesses_and_verify_witness_replays(tmp_path, capsys):
    out_path = tmp_path / "witnesses.json"
    code, out, _ = run(
        capsys,
        "search", "--rule", "reu:power:2", "--trials", "2000", "--seed", "11",
        "--states", "2", "--acts", "2", "--signals", "2", "--out", str(out_path),
    )
    assert code == 0
    assert "witnesses=" in out
    entries = json.loads(out_path.read_text())
    assert entries
    assert all(e["voi"] < -1e-6 for e in entries)

    code, out, _ = run(capsys, "verify-witness", str(out_path))
    assert code == 0
    assert f"verified {len(entries)} of {len(entries)}" in out


def test_search_without_out_prints_json_to_stdout(capsys):
    code, out, err = run(
        capsys,
        "search", "--rule", "faulty:complement:0.5", "--trials", "200", "--seed", "13",
    )
    assert code == 0
    assert json.loads(out)
    assert "witnesses=" in err


def test_search_exhausted_returns_3(capsys):
    # two-state credal searches come up empty; that is the documented exit code
    code, out, err = run(
        capsys, "search", "--rule", "gamma", "--trials", "200", "--seed", "1", "--states", "2",
    )
    assert code == 3
    assert json.loads(out) == []


def test_verify_witness_rejects_tampered_file(tmp_path, capsys):
    out_path = tmp_path / "w.json"
    run(
        capsys,
        "search", "--rule", "reu:power:2", "--trials", "2000", "--seed", "11",
        "--states", "2", "--acts", "2", "--signals", "2", "--out", str(out_path),
    )
    entries = json.loads(out_path.read_text())
    entries[0]["voi"] = entries[0]["voi"] - 0.5
    out_path.write_text(json.dumps(entries))
    code, out, _ = run(capsys, "verify-witness", str(out_path))
    assert code == 1
    assert "re-evaluation" in out


def test_report_all_rows_pass(capsys):
    code, out, _ = run(capsys, "report")
    assert code == 0
    assert "FAIL" not in out
    assert "| alice-basic | 0 | eu_act | 10 | 10 | pass |" in out
    assert "| alice-basic | 0 | delta | 8 | 8 | pass |" in out
    assert "| alice-confident | 0 | delta | 0.5 | 0.5 | pass |" in out
    assert "0.01219512" in out
    assert "| alice-noisy | 0.02 | eu_defer | 39.68 | 39.68 | pass |" in out
    assert "| alice-noisy | 0.02 | eu_learn | 40 | 40 | pass |" in out
    assert "all pass" in out


def test_report_is_deterministic(capsys):
    _, first, _ = run(capsys, "report")
    _, second, _ = run(capsys, "report")
    assert first == second
