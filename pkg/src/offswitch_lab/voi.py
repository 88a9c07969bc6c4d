"""Value-of-information accounting.

``value_of_learning_eu`` is the classic learn-then-choose computation for an
expected-utility agent, whose gap over choosing now is never negative.
The other entry points evaluate the same learn-then-choose prospect by the
lights of agents for which that guarantee breaks: risk-weighted maximizers,
credal (imprecise) maximin agents, and agents that anticipate failing to
conditionalize.

Evaluation conventions, fixed once here:

- Risk weighting is applied once, globally, to the joint (state, signal)
  prospect induced by the signal-contingent plan, not stage by stage. A
  stage-wise evaluation would collapse to the expected-utility answer and
  hide the phenomenon being studied.
- The credal learning value is the worst case across credal members of the
  whole contingent plan. The plan picks, per signal, the maximin act at the
  member-wise conditioned credal set; each member then scores the plan with
  its own marginals and posteriors.
- A faulty updater only mis-chooses acts. Payoffs are always scored under
  the true Bayesian posterior, because the evidence itself is veridical;
  only the agent's handling of it may fail.
- Signals with zero marginal probability are skipped and contribute zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    CredalSet,
    DecisionProblem,
    DecisionRule,
    ExpectedUtilityRule,
    Faulty,
    GammaMaximinRule,
    RiskWeightedRule,
    SignalChannel,
    Updater,
    best_act_eu,
    expected_utility,
    gamma_maximin,
    misupdate,
    risk_weighted_eu,
    risk_weighted_value,
)
from .errors import DimensionMismatch, MissingRuleData


@dataclass(frozen=True)
class SignalOutcome:
    """Per-signal row of a VOI report: what arrives, how likely, what gets done."""

    signal: str
    marginal: float
    act_index: int
    value: float


@dataclass(frozen=True)
class VoiReport:
    """Outcome of a choose-now versus learn-then-choose comparison.

    ``voi`` is always ``value_learning - value_now``. For the globally
    evaluated risk-weighted rule the per-signal values are diagnostic (the
    total is not their marginal-weighted sum); for every other rule it is.
    """

    value_now: float
    value_learning: float
    voi: float
    rule: str
    per_signal: tuple[SignalOutcome, ...]


def _check_channel(problem: DecisionProblem, channel: SignalChannel) -> None:
    if len(channel.likelihood) != len(problem.states):
        raise DimensionMismatch(
            f"channel has {len(channel.likelihood)} rows for {len(problem.states)} states"
        )


def value_now(problem: DecisionProblem, belief, rule: DecisionRule) -> float:
    """The rule's best-act value at the current belief, without learning.

    For the credal rule the belief argument is ignored: the credal set
    carried by the rule replaces the point belief.
    """
    if isinstance(rule, ExpectedUtilityRule):
        return best_act_eu(problem, belief)[1]
    if isinstance(rule, RiskWeightedRule):
        if rule.risk is None:
            raise MissingRuleData("risk-weighted rule carries no risk function")
        return max(
            risk_weighted_eu(problem, i, belief, rule.risk) for i in range(len(problem.acts))
        )
    if isinstance(rule, GammaMaximinRule):
        if rule.credal is None:
            raise MissingRuleData("gamma-maximin rule carries no credal set")
        return gamma_maximin(problem, rule.credal)[1]
    raise MissingRuleData(f"unknown decision rule {rule!r}")


def value_of_learning_eu(problem: DecisionProblem, belief, channel: SignalChannel) -> VoiReport:
    """Learn-then-choose value for an expected-utility conditionalizer.

    Averages, over signals, the best posterior expected utility. The
    resulting voi is non-negative up to float noise for every valid input.
    """
    _check_channel(problem, channel)
    belief = tuple(belief)
    if len(belief) != len(problem.states):
        raise DimensionMismatch(
            f"belief has {len(belief)} entries for {len(problem.states)} states"
        )
    _, now = best_act_eu(problem, belief)
    rows = []
    total = 0.0
    for j, signal in enumerate(channel.signals):
        marg = sum(b * row[j] for b, row in zip(belief, channel.likelihood))
        if marg <= 0.0:
            continue
        post = tuple(b * row[j] / marg for b, row in zip(belief, channel.likelihood))
        idx, val = best_act_eu(problem, post)
        rows.append(SignalOutcome(signal, marg, idx, val))
        total += marg * val
    return VoiReport(now, total, total - now, "eu", tuple(rows))


def _learning_reu(problem, belief, channel, risk) -> VoiReport:
    n_acts = len(problem.acts)
    rows = []
    joint: list[tuple[float, float]] = []
    for j, signal in enumerate(channel.signals):
        marg = sum(b * row[j] for b, row in zip(belief, channel.likelihood))
        if marg <= 0.0:
            continue
        post = tuple(b * row[j] / marg for b, row in zip(belief, channel.likelihood))
        best_index, best_value = 0, -float("inf")
        for i in range(n_acts):
            value = risk_weighted_eu(problem, i, post, risk)
            if value > best_value:
                best_index, best_value = i, value
        rows.append(SignalOutcome(signal, marg, best_index, best_value))
        utilities = problem.acts[best_index].utilities
        for w, (b, row) in enumerate(zip(belief, channel.likelihood)):
            p = b * row[j]
            if p > 0.0:
                joint.append((utilities[w], p))
    learning = risk_weighted_value(joint, risk)
    now = max(risk_weighted_eu(problem, i, belief, risk) for i in range(n_acts))
    return VoiReport(now, learning, learning - now, "reu", tuple(rows))


def _learning_gamma(problem, channel, credal: CredalSet) -> VoiReport:
    n_states = len(problem.states)
    if any(len(m) != n_states for m in credal.members):
        raise DimensionMismatch("credal members do not match the problem's state space")

    # Plan: per signal, the maximin act at the member-wise conditioned credal set.
    plan: dict[int, int] = {}
    for j in range(len(channel.signals)):
        post_members = []
        for member in credal.members:
            marg = sum(b * row[j] for b, row in zip(member, channel.likelihood))
            if marg <= 0.0:
                continue
            post_members.append(
                tuple(b * row[j] / marg for b, row in zip(member, channel.likelihood))
            )
        if not post_members:
            continue
        plan[j] = gamma_maximin(problem, CredalSet(tuple(post_members)))[0]

    # Each member scores the whole plan with its own marginals and posteriors;
    # the learning value is the worst of those scores.
    worst_value = float("inf")
    worst_rows: tuple[SignalOutcome, ...] = ()
    for member in credal.members:
        member_total = 0.0
        member_rows = []
        for j, act_index in sorted(plan.items()):
            marg = sum(b * row[j] for b, row in zip(member, channel.likelihood))
            if marg <= 0.0:
                continue
            post = tuple(b * row[j] / marg for b, row in zip(member, channel.likelihood))
            val = expected_utility(problem, act_index, post)
            member_rows.append(SignalOutcome(channel.signals[j], marg, act_index, val))
            member_total += marg * val
        if member_total < worst_value:
            worst_value = member_total
            worst_rows = tuple(member_rows)
    now = gamma_maximin(problem, credal)[1]
    return VoiReport(now, worst_value, worst_value - now, "gamma-maximin", worst_rows)


def value_of_learning_rule(
    problem: DecisionProblem, belief, channel: SignalChannel, rule: DecisionRule
) -> VoiReport:
    """Learn-then-choose value as evaluated by the given decision rule.

    Reduces to ``value_of_learning_eu`` for the expected-utility rule and
    for a risk-weighted rule with the identity risk function; a singleton
    credal set reduces the same way. Non-trivial rule data can make the
    reported voi strictly negative, which is the point of computing it.
    """
    _check_channel(problem, channel)
    belief = tuple(belief)
    if len(belief) != len(problem.states):
        raise DimensionMismatch(
            f"belief has {len(belief)} entries for {len(problem.states)} states"
        )
    if isinstance(rule, ExpectedUtilityRule):
        return value_of_learning_eu(problem, belief, channel)
    if isinstance(rule, RiskWeightedRule):
        if rule.risk is None:
            raise MissingRuleData("risk-weighted rule carries no risk function")
        return _learning_reu(problem, belief, channel, rule.risk)
    if isinstance(rule, GammaMaximinRule):
        if rule.credal is None:
            raise MissingRuleData("gamma-maximin rule carries no credal set")
        return _learning_gamma(problem, channel, rule.credal)
    raise MissingRuleData(f"unknown decision rule {rule!r}")


def value_of_learning_faulty(
    problem: DecisionProblem, belief, channel: SignalChannel, updater: Updater
) -> VoiReport:
    """Learn-then-choose value for an agent that may fail to conditionalize.

    With probability 1 - q the agent updates correctly and picks the
    posterior-best act; with probability q it forms the misupdated belief
    and picks the act that looks best there. Either way the act is scored
    under the true posterior. Per-signal rows report the correctly-updated
    act choice and the blended conditional value, so the learning value is
    their marginal-weighted sum.
    """
    if not isinstance(updater, Faulty):
        raise MissingRuleData("faulty learning value needs a Faulty updater")
    _check_channel(problem, channel)
    belief = tuple(belief)
    if len(belief) != len(problem.states):
        raise DimensionMismatch(
            f"belief has {len(belief)} entries for {len(problem.states)} states"
        )
    q = updater.q
    _, now = best_act_eu(problem, belief)
    rows = []
    total = 0.0
    for j, signal in enumerate(channel.signals):
        marg = sum(b * row[j] for b, row in zip(belief, channel.likelihood))
        if marg <= 0.0:
            continue
        post = tuple(b * row[j] / marg for b, row in zip(belief, channel.likelihood))
        good_index, good_value = best_act_eu(problem, post)
        if q > 0.0:
            wrong_belief = misupdate(belief, channel, signal, updater.kind)
            wrong_index, _ = best_act_eu(problem, wrong_belief)
            blended = (1.0 - q) * good_value + q * expected_utility(problem, wrong_index, post)
        else:
            blended = good_value
        rows.append(SignalOutcome(signal, marg, good_index, blended))
        total += marg * blended
    return VoiReport(now, total, total - now, "faulty", tuple(rows))
