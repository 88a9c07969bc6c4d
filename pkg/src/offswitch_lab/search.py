"""Seeded randomized generation, theorem property runs, and counterexample search.

Every trial derives its own generator from the master seed and the trial
index, so results are fully determined by (seed, trial_index) and identical
under any execution order or worker count. The per-trial stream is numpy's
PCG64 seeded through ``SeedSequence(seed, spawn_key=(trial_index,))``.

Witnesses of information aversion are re-verified before emission: the
candidate is serialized, decoded again and re-evaluated through the voi
module, and must reproduce its voi within 1e-10.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import jsonio
from .core import (
    Act,
    ComplementConditionalization,
    CredalSet,
    CustomPosterior,
    DecisionProblem,
    DecisionRule,
    Faulty,
    GammaMaximinRule,
    RiskFunction,
    RiskWeightedRule,
    SignalChannel,
    StayAtPrior,
    Updater,
    is_identity_risk,
)
from .distributions import Discrete
from .errors import RuleCannotBeAverse
from .offswitch import theorem1_check
from .voi import value_of_learning_eu, value_of_learning_faulty, value_of_learning_rule

REVERIFY_TOL = 1e-10

MISUPDATE_STAY = "stay-at-prior"
MISUPDATE_COMPLEMENT = "complement-conditionalization"
MISUPDATE_CUSTOM = "custom-posterior"


@dataclass(frozen=True)
class EuSearch:
    """Plain expected utility; valid for theorem checks, never averse."""


@dataclass(frozen=True)
class ReuSearch:
    """Risk-weighted expected utility with a fixed risk function."""

    risk: RiskFunction


@dataclass(frozen=True)
class CredalSearch:
    """Gamma-maximin with a fresh credal set of ``members`` priors per trial."""

    members: int = 2

    def __post_init__(self) -> None:
        if self.members < 1:
            raise ValueError("credal search needs at least one member")


@dataclass(frozen=True)
class FaultySearch:
    """Updater that misfires with probability q; the table for the custom mode
    is sampled per trial."""

    q: float
    kind: str = MISUPDATE_COMPLEMENT

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", float(self.q))
        if not (0.0 <= self.q <= 1.0):
            raise ValueError(f"misupdate probability must lie in [0, 1], got {self.q!r}")
        if self.kind not in (MISUPDATE_STAY, MISUPDATE_COMPLEMENT, MISUPDATE_CUSTOM):
            raise ValueError(f"unknown misupdate kind {self.kind!r}")


SearchRule = EuSearch | ReuSearch | CredalSearch | FaultySearch


@dataclass(frozen=True)
class SearchConfig:
    """Everything a randomized run needs to be reproducible."""

    seed: int
    trials: int
    state_count: int = 3
    act_count: int = 3
    signal_count: int = 2
    utility_range: tuple[float, float] = (-10.0, 10.0)
    rule: SearchRule = EuSearch()
    aversion_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ValueError("trial count must be at least 1")
        if min(self.state_count, self.act_count, self.signal_count) < 1:
            raise ValueError("state, act and signal counts must be at least 1")
        lo, hi = self.utility_range
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"utility range needs lo < hi, got {self.utility_range!r}")
        if not self.aversion_tolerance > 0.0:
            raise ValueError("aversion tolerance must be positive")


@dataclass(frozen=True)
class Witness:
    """One concrete instance on which the rule under test rejects free information."""

    problem: DecisionProblem
    channel: SignalChannel
    rule: DecisionRule | Updater
    voi: float
    trial_index: int


@dataclass(frozen=True)
class CheckViolation:
    trial_index: int
    detail: str
    value: float


@dataclass(frozen=True)
class CheckReport:
    trials: int
    violations: tuple[CheckViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial_index,)))


def _draw_instance(config: SearchConfig, rng: np.random.Generator) -> tuple[DecisionProblem, SignalChannel]:
    lo, hi = config.utility_range
    prior = rng.dirichlet(np.ones(config.state_count))
    utilities = rng.uniform(lo, hi, size=(config.act_count, config.state_count))
    rows = rng.dirichlet(np.ones(config.signal_count), size=config.state_count)
    problem = DecisionProblem(
        states=tuple(f"state{i}" for i in range(config.state_count)),
        prior=tuple(prior),
        acts=tuple(Act(f"act{k}", tuple(utilities[k])) for k in range(config.act_count)),
    )
    channel = SignalChannel(
        signals=tuple(f"signal{j}" for j in range(config.signal_count)),
        likelihood=tuple(tuple(row) for row in rows),
    )
    return problem, channel


def random_instance(config: SearchConfig, trial_index: int) -> tuple[DecisionProblem, SignalChannel]:
    """Sample one (problem, channel) pair, fully determined by (seed, trial_index).

    Priors and channel rows come from the flat Dirichlet (symmetric simplex)
    distribution; utilities are uniform in the configured range.
    """
    return _draw_instance(config, _trial_rng(config.seed, trial_index))


def random_discrete_prior(config: SearchConfig, trial_index: int) -> Discrete:
    """Sample a discrete utility prior with 1 to 4 atoms.

    Values are uniform in the configured utility range and weights come from
    the flat Dirichlet, so one-sided supports occur regularly in the stream.
    """
    rng = _trial_rng(config.seed, trial_index)
    count = int(rng.integers(1, 5))
    values = rng.uniform(*config.utility_range, size=count)
    weights = rng.dirichlet(np.ones(count))
    atoms = tuple((float(v), float(w)) for v, w in zip(values, weights) if w > 0.0)
    return Discrete(atoms)


def verify_good(config: SearchConfig) -> CheckReport:
    """Run the learn-then-choose inequality on random instances; expect no violations."""
    if not isinstance(config.rule, EuSearch):
        raise ValueError("the learning inequality is only guaranteed under plain expected utility")
    violations = []
    for i in range(config.trials):
        problem, channel = random_instance(config, i)
        report = value_of_learning_eu(problem, problem.prior, channel)
        if report.voi < -1e-12:
            violations.append(CheckViolation(i, "negative value of learning", report.voi))
    return CheckReport(config.trials, tuple(violations))


def verify_theorem1(config: SearchConfig) -> CheckReport:
    """Run the deference inequality on random discrete priors; expect no violations."""
    violations = []
    for i in range(config.trials):
        prior = random_discrete_prior(config, i)
        result = theorem1_check(prior)
        if not result.nonneg:
            violations.append(CheckViolation(i, "negative deference advantage", result.delta))
        elif result.strict_expected and not result.strict_observed:
            violations.append(CheckViolation(i, "strictness clause failed", result.delta))
    return CheckReport(config.trials, tuple(violations))


def _reject_if_never_averse(rule: SearchRule) -> None:
    if isinstance(rule, EuSearch):
        raise RuleCannotBeAverse(
            "expected utility with conditionalization never rejects free information "
            "(Good's theorem); an empty search would be misleading"
        )
    if isinstance(rule, ReuSearch) and is_identity_risk(rule.risk):
        raise RuleCannotBeAverse(
            "an identity risk function reduces risk-weighted utility to expected utility, "
            "which never rejects free information"
        )
    if isinstance(rule, CredalSearch) and rule.members < 2:
        raise RuleCannotBeAverse(
            "a singleton credal set reduces gamma-maximin to expected utility, "
            "which never rejects free information"
        )
    if isinstance(rule, FaultySearch) and (rule.kind == MISUPDATE_STAY or rule.q == 0.0):
        raise RuleCannotBeAverse(
            "staying at the prior (or never misfiring) only blends the learning value "
            "toward the choose-now value; it cannot make learning strictly bad"
        )


def _concrete_rule(
    search_rule: SearchRule,
    rng: np.random.Generator,
    config: SearchConfig,
    channel: SignalChannel,
) -> DecisionRule | Updater:
    """Materialize per-trial rule data; draws happen after the instance draws."""
    if isinstance(search_rule, ReuSearch):
        return RiskWeightedRule(search_rule.risk)
    if isinstance(search_rule, CredalSearch):
        members = rng.dirichlet(np.ones(config.state_count), size=search_rule.members)
        return GammaMaximinRule(CredalSet(tuple(tuple(m) for m in members)))
    if isinstance(search_rule, FaultySearch):
        if search_rule.kind == MISUPDATE_COMPLEMENT:
            return Faulty(search_rule.q, ComplementConditionalization())
        if search_rule.kind == MISUPDATE_STAY:
            return Faulty(search_rule.q, StayAtPrior())
        table = {
            signal: tuple(rng.dirichlet(np.ones(config.state_count)))
            for signal in channel.signals
        }
        return Faulty(search_rule.q, CustomPosterior(table))
    raise ValueError(f"no concrete rule for {search_rule!r}")


def evaluate_rule(
    problem: DecisionProblem,
    channel: SignalChannel,
    rule: DecisionRule | Updater,
):
    """Dispatch to the matching voi computation for a concrete rule or updater."""
    if isinstance(rule, Faulty):
        return value_of_learning_faulty(problem, problem.prior, channel, rule)
    if isinstance(rule, (RiskWeightedRule, GammaMaximinRule)):
        return value_of_learning_rule(problem, problem.prior, channel, rule)
    return value_of_learning_eu(problem, problem.prior, channel)


def witness_to_jsonable(witness: Witness) -> dict:
    return {
        "trial_index": witness.trial_index,
        "voi": witness.voi,
        "problem": jsonio.encode_problem(witness.problem),
        "channel": jsonio.encode_channel(witness.channel),
        "rule": jsonio.encode_rule_or_updater(witness.rule),
    }


def witness_from_jsonable(obj) -> Witness:
    if not isinstance(obj, dict):
        raise ValueError("witness must be a JSON object")
    unknown = set(obj) - {"trial_index", "voi", "problem", "channel", "rule"}
    if unknown:
        raise ValueError(f"witness has unknown fields: {sorted(unknown)}")
    return Witness(
        problem=jsonio.decode_problem(obj["problem"]),
        channel=jsonio.decode_channel(obj["channel"]),
        rule=jsonio.decode_rule_or_updater(obj["rule"]),
        voi=float(obj["voi"]),
        trial_index=int(obj["trial_index"]),
    )


def replay_witness(witness: Witness) -> float:
    """Re-evaluate a witness from its own embedded data; returns the fresh voi."""
    return evaluate_rule(witness.problem, witness.channel, witness.rule).voi


def _reverifies(witness: Witness) -> bool:
    round_tripped = witness_from_jsonable(json.loads(json.dumps(witness_to_jsonable(witness))))
    return abs(replay_witness(round_tripped) - witness.voi) <= REVERIFY_TOL


def find_information_aversion(config: SearchConfig) -> list[Witness]:
    """Collect every trial on which the configured rule strictly rejects information.

    Returns the verified witnesses sorted by voi ascending (worst first).
    Rules that provably cannot be averse are rejected with
    ``RuleCannotBeAverse`` rather than silently returning nothing.
    """
    _reject_if_never_averse(config.rule)
    witnesses = []
    for i in range(config.trials):
        rng = _trial_rng(config.seed, i)
        problem, channel = _draw_instance(config, rng)
        rule = _concrete_rule(config.rule, rng, config, channel)
        report = evaluate_rule(problem, channel, rule)
        if report.voi < -config.aversion_tolerance:
            witness = Witness(problem, channel, rule, report.voi, i)
            if not _reverifies(witness):
                raise AssertionError(
                    f"witness at trial {i} did not reproduce its voi on re-evaluation"
                )
            witnesses.append(witness)
    witnesses.sort(key=lambda w: (w.voi, w.trial_index))
    return witnesses
