"""JSON encodings for the domain types.

Encoders produce plain dicts/lists ready for ``json.dumps``; decoders are
strict and reject unknown fields so scenario files fail loudly instead of
silently ignoring a typo. Decoder errors are ValueError with a message that
names the offending field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Act,
    ComplementConditionalization,
    Conditionalization,
    CredalSet,
    CustomPosterior,
    DecisionProblem,
    DecisionRule,
    ExpectedUtilityRule,
    Faulty,
    GammaMaximinRule,
    IdentityRisk,
    PowerRisk,
    RiskFunction,
    RiskWeightedRule,
    SignalChannel,
    StayAtPrior,
    TableRisk,
    Updater,
)
from .distributions import Discrete, Uniform, UtilityDistribution
from .offswitch import OffSwitchReport, OffSwitchScenario
from .voi import VoiReport


def _check_fields(obj: dict, required: tuple[str, ...], optional: tuple[str, ...], what: str) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{what} must be a JSON object, got {type(obj).__name__}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ValueError(f"{what} has unknown fields: {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise ValueError(f"{what} is missing fields: {sorted(missing)}")


def encode_distribution(d: UtilityDistribution) -> dict:
    if isinstance(d, Uniform):
        return {"kind": "uniform", "lo": d.lo, "hi": d.hi}
    return {"kind": "discrete", "atoms": [[v, w] for v, w in d.atoms]}


def decode_distribution(obj) -> UtilityDistribution:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("prior must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "uniform":
        _check_fields(obj, ("kind", "lo", "hi"), (), "uniform prior")
        return Uniform(obj["lo"], obj["hi"])
    if kind == "discrete":
        _check_fields(obj, ("kind", "atoms"), (), "discrete prior")
        atoms = obj["atoms"]
        if not isinstance(atoms, list) or not all(
            isinstance(a, (list, tuple)) and len(a) == 2 for a in atoms
        ):
            raise ValueError("discrete prior atoms must be a list of [value, weight] pairs")
        return Discrete(tuple((v, w) for v, w in atoms))
    raise ValueError(f"prior kind must be 'uniform' or 'discrete', got {kind!r}")


def encode_problem(problem: DecisionProblem) -> dict:
    return {
        "states": list(problem.states),
        "prior": list(problem.prior),
        "acts": [{"name": a.name, "utilities": list(a.utilities)} for a in problem.acts],
    }


def decode_problem(obj) -> DecisionProblem:
    _check_fields(obj, ("states", "prior", "acts"), (), "decision problem")
    acts = []
    for entry in obj["acts"]:
        _check_fields(entry, ("name", "utilities"), (), "act")
        acts.append(Act(entry["name"], tuple(entry["utilities"])))
    return DecisionProblem(tuple(obj["states"]), tuple(obj["prior"]), tuple(acts))


def encode_channel(channel: SignalChannel) -> dict:
    return {
        "signals": list(channel.signals),
        "likelihood": [list(row) for row in channel.likelihood],
    }


def decode_channel(obj) -> SignalChannel:
    _check_fields(obj, ("signals", "likelihood"), (), "signal channel")
    return SignalChannel(tuple(obj["signals"]), tuple(tuple(row) for row in obj["likelihood"]))


def encode_risk(risk: RiskFunction) -> dict:
    if isinstance(risk, IdentityRisk):
        return {"kind": "identity"}
    if isinstance(risk, PowerRisk):
        return {"kind": "power", "k": risk.k}
    return {"kind": "table", "knots": [[p, r] for p, r in risk.knots]}


def decode_risk(obj) -> RiskFunction:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("risk function must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "identity":
        _check_fields(obj, ("kind",), (), "identity risk")
        return IdentityRisk()
    if kind == "power":
        _check_fields(obj, ("kind", "k"), (), "power risk")
        return PowerRisk(obj["k"])
    if kind == "table":
        _check_fields(obj, ("kind", "knots"), (), "table risk")
        return TableRisk(tuple((p, r) for p, r in obj["knots"]))
    raise ValueError(f"risk kind must be 'identity', 'power' or 'table', got {kind!r}")


def encode_credal(credal: CredalSet) -> dict:
    return {"members": [list(m) for m in credal.members]}


def decode_credal(obj) -> CredalSet:
    _check_fields(obj, ("members",), (), "credal set")
    return CredalSet(tuple(tuple(m) for m in obj["members"]))


_MISUPDATE_NAMES = {
    StayAtPrior: "stay-at-prior",
    ComplementConditionalization: "complement-conditionalization",
    CustomPosterior: "custom-posterior",
}


def encode_updater(updater: Updater) -> dict:
    if isinstance(updater, Conditionalization):
        return {"kind": "conditionalization"}
    out = {"kind": "faulty", "q": updater.q, "mode": _MISUPDATE_NAMES[type(updater.kind)]}
    if isinstance(updater.kind, CustomPosterior):
        out["table"] = {signal: list(vec) for signal, vec in updater.kind.table}
    return out


def decode_updater(obj) -> Updater:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("updater must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "conditionalization":
        _check_fields(obj, ("kind",), (), "updater")
        return Conditionalization()
    if kind != "faulty":
        raise ValueError(f"updater kind must be 'conditionalization' or 'faulty', got {kind!r}")
    _check_fields(obj, ("kind", "q", "mode"), ("table",), "faulty updater")
    mode = obj["mode"]
    if mode == "stay-at-prior":
        return Faulty(obj["q"], StayAtPrior())
    if mode == "complement-conditionalization":
        return Faulty(obj["q"], ComplementConditionalization())
    if mode == "custom-posterior":
        if "table" not in obj:
            raise ValueError("custom-posterior updater needs a 'table' field")
        table = {signal: tuple(vec) for signal, vec in obj["table"].items()}
        return Faulty(obj["q"], CustomPosterior(table))
    raise ValueError(
        "updater mode must be 'stay-at-prior', 'complement-conditionalization' "
        f"or 'custom-posterior', got {mode!r}"
    )


def encode_rule(rule: DecisionRule) -> dict:
    if isinstance(rule, ExpectedUtilityRule):
        return {"kind": "eu"}
    if isinstance(rule, RiskWeightedRule):
        return {"kind": "reu", "risk": encode_risk(rule.risk)}
    return {"kind": "gamma-maximin", "credal": encode_credal(rule.credal)}


def decode_rule(obj) -> DecisionRule:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("decision rule must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "eu":
        _check_fields(obj, ("kind",), (), "eu rule")
        return ExpectedUtilityRule()
    if kind == "reu":
        _check_fields(obj, ("kind", "risk"), (), "reu rule")
        return RiskWeightedRule(decode_risk(obj["risk"]))
    if kind == "gamma-maximin":
        _check_fields(obj, ("kind", "credal"), (), "gamma-maximin rule")
        return GammaMaximinRule(decode_credal(obj["credal"]))
    raise ValueError(f"rule kind must be 'eu', 'reu' or 'gamma-maximin', got {kind!r}")


def encode_rule_or_updater(rule: DecisionRule | Updater) -> dict:
    if isinstance(rule, (Conditionalization, Faulty)):
        return encode_updater(rule)
    return encode_rule(rule)


def decode_rule_or_updater(obj) -> DecisionRule | Updater:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("rule must be an object with a 'kind' field")
    if obj["kind"] in ("conditionalization", "faulty"):
        return decode_updater(obj)
    return decode_rule(obj)


def encode_voi_report(report: VoiReport) -> dict:
    return {
        "value_now": report.value_now,
        "value_learning": report.value_learning,
        "voi": report.voi,
        "rule": report.rule,
        "per_signal": [
            {"signal": r.signal, "marginal": r.marginal, "act_index": r.act_index, "value": r.value}
            for r in report.per_signal
        ],
    }


def encode_offswitch_report(report: OffSwitchReport) -> dict:
    return {
        "eu_act": report.eu_act,
        "eu_nothing": report.eu_nothing,
        "eu_defer": report.eu_defer,
        "eu_learn": report.eu_learn,
        "delta": report.delta,
        "best": report.best,
        "threshold_epsilon": report.threshold_epsilon,
    }


@dataclass(frozen=True)
class LoadedScenario:
    """A scenario file's content: the game plus optional rule/updater blocks."""

    scenario: OffSwitchScenario
    rule: DecisionRule | None
    updater: Updater | None


def encode_scenario(scenario: OffSwitchScenario) -> dict:
    return {
        "label": scenario.label,
        "prior": encode_distribution(scenario.prior),
        "epsilon": scenario.epsilon,
    }


def decode_scenario(obj) -> LoadedScenario:
    _check_fields(obj, ("label", "prior", "epsilon"), ("rule", "updater"), "scenario")
    scenario = OffSwitchScenario(
        prior=decode_distribution(obj["prior"]),
        epsilon=obj["epsilon"],
        label=str(obj["label"]),
    )
    rule = decode_rule(obj["rule"]) if "rule" in obj else None
    updater = decode_updater(obj["updater"]) if "updater" in obj else None
    return LoadedScenario(scenario, rule, updater)
