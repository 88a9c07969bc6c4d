"""Command-line front end.

Subcommands: scenario, sweep, check, search, verify-witness, report.
Exit codes: 0 success, 1 check/report/verification failure, 2 usage error,
3 search exhausted without a witness. Every command is deterministic given
its arguments; tables round to 7 significant digits, JSON and CSV keep full
precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import jsonio, search
from .distributions import Uniform
from .errors import RuleCannotBeAverse
from .offswitch import OffSwitchScenario, best_option, reduce_to_two_state
from .search import (
    MISUPDATE_COMPLEMENT,
    MISUPDATE_CUSTOM,
    MISUPDATE_STAY,
    CredalSearch,
    EuSearch,
    FaultySearch,
    ReuSearch,
    SearchConfig,
)
from .core import IdentityRisk, PowerRisk
from .voi import value_of_learning_faulty, value_of_learning_rule

BUILTIN_SCENARIOS = {
    "alice-basic": OffSwitchScenario(Uniform(-40.0, 60.0), 0.0, "alice-basic"),
    "alice-confident": OffSwitchScenario(Uniform(-10.0, 90.0), 0.0, "alice-confident"),
    "alice-noisy": OffSwitchScenario(Uniform(-10.0, 90.0), 0.02, "alice-noisy"),
}

REFERENCE_ROWS = (
    ("alice-basic", 0.0, "eu_act", 10.0),
    ("alice-basic", 0.0, "eu_defer", 18.0),
    ("alice-basic", 0.0, "delta", 8.0),
    ("alice-basic", 0.0, "best", "defer"),
    ("alice-confident", 0.0, "eu_act", 40.0),
    ("alice-confident", 0.0, "eu_defer", 40.5),
    ("alice-confident", 0.0, "delta", 0.5),
    ("alice-confident", 0.0, "threshold_epsilon", 0.5 / 41.0),
    ("alice-noisy", 0.02, "eu_defer", 39.68),
    ("alice-noisy", 0.02, "eu_learn", 40.0),
    ("alice-noisy", 0.02, "best", "act"),
)

REPORT_TOL = 1e-9


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return format(value, ".7g")
    return str(value)


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _load_scenario(name_or_path: str, epsilon_override: float | None) -> jsonio.LoadedScenario:
    if name_or_path in BUILTIN_SCENARIOS:
        loaded = jsonio.LoadedScenario(BUILTIN_SCENARIOS[name_or_path], None, None)
    else:
        path = Path(name_or_path)
        if not path.is_file():
            raise ValueError(
                f"unknown scenario {name_or_path!r}: not a built-in "
                f"({', '.join(sorted(BUILTIN_SCENARIOS))}) and not a readable file"
            )
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValueError(f"scenario file {name_or_path!r} is not valid JSON: {exc}") from exc
        loaded = jsonio.decode_scenario(obj)
    if epsilon_override is not None:
        scenario = OffSwitchScenario(loaded.scenario.prior, epsilon_override, loaded.scenario.label)
        loaded = jsonio.LoadedScenario(scenario, loaded.rule, loaded.updater)
    return loaded


def _scenario_payload(loaded: jsonio.LoadedScenario) -> dict:
    scenario = loaded.scenario
    report = best_option(scenario.prior, scenario.epsilon)
    payload = {
        "label": scenario.label,
        "prior": jsonio.encode_distribution(scenario.prior),
        "epsilon": scenario.epsilon,
        "report": jsonio.encode_offswitch_report(report),
    }
    game = reduce_to_two_state(scenario.prior, scenario.epsilon)
    if loaded.rule is not None:
        rule_report = value_of_learning_rule(game.problem, game.problem.prior, game.channel, loaded.rule)
        payload["rule_analysis"] = jsonio.encode_voi_report(rule_report)
    if loaded.updater is not None:
        faulty_report = value_of_learning_faulty(
            game.problem, game.problem.prior, game.channel, loaded.updater
        )
        payload["updater_analysis"] = jsonio.encode_voi_report(faulty_report)
    return payload


def cmd_scenario(args) -> int:
    try:
        loaded = _load_scenario(args.scenario, args.epsilon)
        payload = _scenario_payload(loaded)
    except (ValueError, TypeError, KeyError) as exc:
        return _usage_error(str(exc))
    if args.json:
        print(json.dumps(payload, indent=2))
        return 0
    report = payload["report"]
    rows = [
        ("scenario", payload["label"]),
        ("prior", _describe_prior(loaded.scenario)),
        ("epsilon", _fmt(payload["epsilon"])),
        ("eu_act", _fmt(report["eu_act"])),
        ("eu_nothing", _fmt(report["eu_nothing"])),
        ("eu_defer", _fmt(report["eu_defer"])),
        ("eu_learn", _fmt(report["eu_learn"])),
        ("delta", _fmt(report["delta"])),
        ("best", report["best"]),
        ("threshold", _fmt(report["threshold_epsilon"])),
    ]
    for key, analysis in (("rule", "rule_analysis"), ("updater", "updater_analysis")):
        if analysis in payload:
            sub = payload[analysis]
            rows.append((f"{key}_rule", sub["rule"]))
            rows.append((f"{key}_value_now", _fmt(sub["value_now"])))
            rows.append((f"{key}_value_learning", _fmt(sub["value_learning"])))
            rows.append((f"{key}_voi", _fmt(sub["voi"])))
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        print(f"{key:<{width}}  {value}")
    return 0


def _describe_prior(scenario: OffSwitchScenario) -> str:
    prior = scenario.prior
    if isinstance(prior, Uniform):
        return f"uniform[{_fmt(prior.lo)}, {_fmt(prior.hi)}]"
    atoms = ", ".join(f"{_fmt(v)}:{_fmt(w)}" for v, w in prior.atoms)
    return f"discrete{{{atoms}}}"


def cmd_sweep(args) -> int:
    try:
        loaded = _load_scenario(args.scenario, None)
    except (ValueError, TypeError, KeyError) as exc:
        return _usage_error(str(exc))
    if not (0.0 <= args.lo < args.hi <= 1.0):
        return _usage_error(f"epsilon grid needs 0 <= lo < hi <= 1, got [{args.lo}, {args.hi}]")
    if args.steps < 2:
        return _usage_error(f"epsilon grid needs at least 2 steps, got {args.steps}")
    prior = loaded.scenario.prior
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["epsilon", "eu_act", "eu_defer", "eu_learn", "best"])
    for i in range(args.steps):
        eps = args.lo + (args.hi - args.lo) * i / (args.steps - 1)
        report = best_option(prior, eps)
        writer.writerow([repr(eps), repr(report.eu_act), repr(report.eu_defer), repr(report.eu_learn), report.best])
    text = buffer.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args) -> int:
    if args.trials < 1:
        return _usage_error(f"trial count must be at least 1, got {args.trials}")
    if args.seed < 0:
        return _usage_error(f"seed must be non-negative, got {args.seed}")
    config = SearchConfig(seed=args.seed, trials=args.trials)
    runner = search.verify_good if args.property == "good" else search.verify_theorem1
    report = runner(config)
    print(f"{args.property}: trials={report.trials} violations={len(report.violations)} seed={args.seed}")
    for violation in report.violations:
        print(f"  trial {violation.trial_index}: {violation.detail} ({violation.value!r})")
    return 0 if report.ok else 1


def parse_rule(text: str) -> search.SearchRule:
    """Parse a --rule string: eu | reu:identity | reu:power:K | gamma[:M] | faulty:KIND:Q."""
    parts = text.split(":")
    head = parts[0]
    if head == "eu" and len(parts) == 1:
        return EuSearch()
    if head == "reu":
        if parts[1:] == ["identity"]:
            return ReuSearch(IdentityRisk())
        if len(parts) == 3 and parts[1] == "power":
            return ReuSearch(PowerRisk(float(parts[2])))
        raise ValueError(f"cannot parse risk-weighted rule {text!r}; use reu:identity or reu:power:K")
    if head == "gamma":
        if len(parts) == 1:
            return CredalSearch()
        if len(parts) == 2:
            return CredalSearch(int(parts[1]))
        raise ValueError(f"cannot parse credal rule {text!r}; use gamma or gamma:M")
    if head == "faulty" and len(parts) == 3:
        kinds = {
            "stay": MISUPDATE_STAY,
            "complement": MISUPDATE_COMPLEMENT,
            "custom": MISUPDATE_CUSTOM,
        }
        if parts[1] not in kinds:
            raise ValueError(f"unknown misupdate kind {parts[1]!r}; use stay, complement or custom")
        return FaultySearch(float(parts[2]), kinds[parts[1]])
    raise ValueError(
        f"cannot parse rule {text!r}; use eu, reu:identity, reu:power:K, gamma[:M] or faulty:KIND:Q"
    )


def cmd_search(args) -> int:
    if args.trials < 1:
        return _usage_error(f"trial count must be at least 1, got {args.trials}")
    if args.seed < 0:
        return _usage_error(f"seed must be non-negative, got {args.seed}")
    try:
        rule = parse_rule(args.rule)
        config = SearchConfig(
            seed=args.seed,
            trials=args.trials,
            state_count=args.states,
            act_count=args.acts,
            signal_count=args.signals,
            rule=rule,
            aversion_tolerance=args.tolerance,
        )
        witnesses = search.find_information_aversion(config)
    except (ValueError, RuleCannotBeAverse) as exc:
        return _usage_error(str(exc))
    text = json.dumps([search.witness_to_jsonable(w) for w in witnesses], indent=2)
    summary = (
        f"witnesses={len(witnesses)} trials={args.trials} seed={args.seed} rule={args.rule}"
        + (f" most_negative_voi={witnesses[0].voi!r}" if witnesses else "")
    )
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(summary)
    else:
        print(text)
        print(summary, file=sys.stderr)
    return 0 if witnesses else 3


def cmd_verify_witness(args) -> int:
    path = Path(args.file)
    if not path.is_file():
        return _usage_error(f"witness file {args.file!r} is not readable")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
        entries = obj if isinstance(obj, list) else [obj]
        witnesses = [search.witness_from_jsonable(entry) for entry in entries]
    except (ValueError, TypeError, KeyError) as exc:
        return _usage_error(f"cannot parse witness file: {exc}")
    failures = 0
    for witness in witnesses:
        replayed = search.replay_witness(witness)
        if abs(replayed - witness.voi) > search.REVERIFY_TOL:
            failures += 1
            print(
                f"trial {witness.trial_index}: stored voi {witness.voi!r} "
                f"but re-evaluation gives {replayed!r}"
            )
    print(f"verified {len(witnesses) - failures} of {len(witnesses)} witnesses within {search.REVERIFY_TOL}")
    return 0 if failures == 0 else 1


def cmd_report(_args) -> int:
    lines = [
        "# Built-in scenario reproduction",
        "",
        "| scenario | epsilon | quantity | expected | computed | status |",
        "|----------|---------|----------|----------|----------|--------|",
    ]
    all_pass = True
    for name, epsilon, quantity, expected in REFERENCE_ROWS:
        scenario = BUILTIN_SCENARIOS[name]
        report = best_option(scenario.prior, epsilon)
        computed = getattr(report, quantity)
        if isinstance(expected, str):
            ok = computed == expected
        else:
            ok = computed is not None and abs(computed - expected) <= REPORT_TOL
        all_pass = all_pass and ok
        lines.append(
            f"| {name} | {_fmt(epsilon)} | {quantity} | {_fmt(expected)} "
            f"| {_fmt(computed)} | {'pass' if ok else 'FAIL'} |"
        )
    lines.append("")
    lines.append(
        f"{sum(1 for _ in REFERENCE_ROWS)} rows, "
        + ("all pass." if all_pass else "some FAILED.")
    )
    print("\n".join(lines))
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="offswitch-lab",
        description="Off-switch game calculations, theorem property runs, and "
        "counterexample searches for information-averse decision rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scenario = sub.add_parser("scenario", help="Evaluate a built-in or JSON scenario.")
    scenario.add_argument("scenario", help="Built-in name (alice-basic, alice-confident, alice-noisy) or a JSON file path.")
    scenario.add_argument("--epsilon", type=float, default=None, help="Override the scenario's garbling probability.")
    scenario.add_argument("--json", action="store_true", help="Emit machine-readable JSON instead of a table.")
    scenario.set_defaults(handler=cmd_scenario)

    sweep = sub.add_parser("sweep", help="CSV of option values over an epsilon grid.")
    sweep.add_argument("scenario", help="Built-in name or JSON file path.")
    sweep.add_argument("--lo", type=float, required=True, help="Grid start (inclusive).")
    sweep.add_argument("--hi", type=float, required=True, help="Grid end (inclusive).")
    sweep.add_argument("--steps", type=int, required=True, help="Number of grid points (>= 2).")
    sweep.add_argument("--out", default=None, help="Write CSV to this file instead of stdout.")
    sweep.set_defaults(handler=cmd_sweep)

    check = sub.add_parser("check", help="Run a randomized property check that must never fail.")
    check.add_argument("property", choices=("good", "theorem1"), help="Which inequality to exercise.")
    check.add_argument("--trials", type=int, default=10000)
    check.add_argument("--seed", type=int, default=0)
    check.set_defaults(handler=cmd_check)

    searcher = sub.add_parser("search", help="Hunt for instances where the rule rejects free information.")
    searcher.add_argument("--rule", required=True, help="eu | reu:identity | reu:power:K | gamma[:M] | faulty:KIND:Q")
    searcher.add_argument("--trials", type=int, default=100000)
    searcher.add_argument("--seed", type=int, default=0)
    searcher.add_argument("--states", type=int, default=3)
    searcher.add_argument("--acts", type=int, default=3)
    searcher.add_argument("--signals", type=int, default=2)
    searcher.add_argument("--tolerance", type=float, default=1e-6, help="Minimum |voi| for a witness.")
    searcher.add_argument("--out", default=None, help="Write witness JSON to this file instead of stdout.")
    searcher.set_defaults(handler=cmd_search)

    verify = sub.add_parser("verify-witness", help="Replay a witness file and confirm stored voi values.")
    verify.add_argument("file", help="Witness JSON produced by the search command.")
    verify.set_defaults(handler=cmd_verify_witness)

    report = sub.add_parser("report", help="Reproduce every built-in reference number and pass/fail each.")
    report.set_defaults(handler=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
