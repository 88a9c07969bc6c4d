"""Finite decision problems, signal channels, and the decision rules on top.

State spaces here are small (a handful of states), so probability vectors
are plain tuples of floats rather than arrays. Every operation is a pure
function over immutable values; nothing mutates after construction.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

from .errors import DimensionMismatch, MissingRuleData, ZeroMarginal

PROB_TOL = 1e-12


def as_probability_vector(vec, what: str = "probability vector") -> tuple[float, ...]:
    """Coerce to a tuple of floats and validate non-negativity and unit sum."""
    out = tuple(float(x) for x in vec)
    if not out:
        raise ValueError(f"{what} must be non-empty")
    if any(x < 0.0 or not math.isfinite(x) for x in out):
        raise ValueError(f"{what} has negative or non-finite entries: {out!r}")
    total = sum(out)
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"{what} sums to {total!r}, expected 1 within {PROB_TOL}")
    return out


@dataclass(frozen=True)
class Act:
    """A named act: one utility per state, in state order."""

    name: str
    utilities: tuple[float, ...]

    def __post_init__(self) -> None:
        utilities = tuple(float(u) for u in self.utilities)
        if not utilities:
            raise ValueError(f"act {self.name!r} needs at least one utility")
        if any(not math.isfinite(u) for u in utilities):
            raise ValueError(f"act {self.name!r} has non-finite utilities")
        object.__setattr__(self, "utilities", utilities)


@dataclass(frozen=True)
class DecisionProblem:
    """A finite state space, a prior over it, and a finite menu of acts."""

    states: tuple[str, ...]
    prior: tuple[float, ...]
    acts: tuple[Act, ...]

    def __post_init__(self) -> None:
        states = tuple(str(s) for s in self.states)
        if not states:
            raise ValueError("decision problem needs at least one state")
        prior = as_probability_vector(self.prior, "prior")
        if len(prior) != len(states):
            raise DimensionMismatch(f"prior has {len(prior)} entries for {len(states)} states")
        acts = tuple(self.acts)
        if not acts:
            raise ValueError("decision problem needs at least one act")
        for act in acts:
            if len(act.utilities) != len(states):
                raise DimensionMismatch(
                    f"act {act.name!r} has {len(act.utilities)} utilities for {len(states)} states"
                )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "acts", acts)


@dataclass(frozen=True)
class SignalChannel:
    """Row-stochastic likelihood table P(signal | state), one row per state.

    A channel whose rows each put probability 1 on a single signal encodes
    learning a partition cell; anything else is a noisy (garbled) signal.
    """

    signals: tuple[str, ...]
    likelihood: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        signals = tuple(str(s) for s in self.signals)
        if not signals:
            raise ValueError("channel needs at least one signal")
        rows = tuple(self.likelihood)
        if not rows:
            raise ValueError("channel needs at least one state row")
        checked = []
        for i, row in enumerate(rows):
            row = tuple(float(x) for x in row)
            if len(row) != len(signals):
                raise DimensionMismatch(
                    f"likelihood row {i} has {len(row)} entries for {len(signals)} signals"
                )
            if any(x < 0.0 or not math.isfinite(x) for x in row):
                raise ValueError(f"likelihood row {i} has negative or non-finite entries")
            total = sum(row)
            if abs(total - 1.0) > PROB_TOL:
                raise ValueError(f"likelihood row {i} sums to {total!r}, expected 1")
            checked.append(row)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "likelihood", tuple(checked))

    @property
    def is_partition(self) -> bool:
        """True when every state emits a single signal with certainty."""
        return all(max(row) == 1.0 for row in self.likelihood)

    def signal_index(self, signal: str) -> int:
        try:
            return self.signals.index(signal)
        except ValueError:
            raise ValueError(f"unknown signal {signal!r}, channel has {self.signals}") from None


@dataclass(frozen=True)
class CredalSet:
    """A non-empty finite set of priors over a shared state space."""

    members: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if not members:
            raise ValueError("credal set needs at least one member")
        checked = tuple(as_probability_vector(m, f"credal member {i}") for i, m in enumerate(members))
        n = len(checked[0])
        if any(len(m) != n for m in checked):
            raise DimensionMismatch("credal members disagree on state count")
        object.__setattr__(self, "members", checked)


@dataclass(frozen=True)
class IdentityRisk:
    """r(p) = p; recovers plain expected utility."""

    def weight(self, p: float) -> float:
        return p


@dataclass(frozen=True)
class PowerRisk:
    """r(p) = p ** k with k > 0; k > 1 underweights good tails (worst-case caution)."""

    k: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", float(self.k))
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise ValueError(f"power risk exponent must be positive, got {self.k!r}")

    def weight(self, p: float) -> float:
        return p**self.k


@dataclass(frozen=True)
class TableRisk:
    """Piecewise-linear risk curve through (p, r(p)) knots.

    Knots must start at (0, 0), end at (1, 1), have strictly increasing p
    and non-decreasing r.
    """

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        knots = tuple((float(p), float(r)) for p, r in self.knots)
        if len(knots) < 2 or knots[0] != (0.0, 0.0) or knots[-1] != (1.0, 1.0):
            raise ValueError("table risk knots must run from (0, 0) to (1, 1)")
        for (p0, r0), (p1, r1) in zip(knots, knots[1:]):
            if not p1 > p0:
                raise ValueError("table risk knot probabilities must be strictly increasing")
            if r1 < r0:
                raise ValueError("table risk values must be non-decreasing")
        object.__setattr__(self, "knots", knots)

    def weight(self, p: float) -> float:
        if p <= 0.0:
            return 0.0
        if p >= 1.0:
            return 1.0
        for (p0, r0), (p1, r1) in zip(self.knots, self.knots[1:]):
            if p <= p1:
                return r0 + (r1 - r0) * (p - p0) / (p1 - p0)
        return 1.0


RiskFunction = IdentityRisk | PowerRisk | TableRisk


def is_identity_risk(risk: RiskFunction) -> bool:
    """True when the risk function is the identity map, however it is spelled."""
    if isinstance(risk, IdentityRisk):
        return True
    if isinstance(risk, PowerRisk):
        return risk.k == 1.0
    return all(p == r for p, r in risk.knots)


@dataclass(frozen=True)
class Conditionalization:
    """Certain Bayesian updating."""


@dataclass(frozen=True)
class StayAtPrior:
    """Misupdate that leaves the belief unchanged."""


@dataclass(frozen=True)
class ComplementConditionalization:
    """Misupdate that conditionalizes on the complement of the observed signal."""


@dataclass(frozen=True)
class CustomPosterior:
    """Misupdate to a fixed per-signal posterior, ignoring the true Bayes update."""

    table: tuple[tuple[str, tuple[float, ...]], ...]

    def __post_init__(self) -> None:
        raw = self.table
        items = sorted(raw.items()) if isinstance(raw, Mapping) else list(raw)
        if not items:
            raise ValueError("custom posterior table must not be empty")
        canon = tuple(
            (str(signal), as_probability_vector(vec, f"custom posterior for {signal!r}"))
            for signal, vec in items
        )
        object.__setattr__(self, "table", canon)

    def posterior_for(self, signal: str) -> tuple[float, ...]:
        for name, vec in self.table:
            if name == signal:
                return vec
        raise MissingRuleData(f"custom posterior table has no entry for signal {signal!r}")


MisupdateKind = StayAtPrior | ComplementConditionalization | CustomPosterior


@dataclass(frozen=True)
class Faulty:
    """Updater that conditionalizes with probability 1 - q and misupdates with probability q."""

    q: float
    kind: MisupdateKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", float(self.q))
        if not (0.0 <= self.q <= 1.0):
            raise ValueError(f"misupdate probability must lie in [0, 1], got {self.q!r}")


Updater = Conditionalization | Faulty


@dataclass(frozen=True)
class ExpectedUtilityRule:
    """Maximize expected utility at the current belief."""


@dataclass(frozen=True)
class RiskWeightedRule:
    """Maximize rank-dependent (risk-weighted) expected utility."""

    risk: RiskFunction


@dataclass(frozen=True)
class GammaMaximinRule:
    """Maximize the worst-case expected utility across a credal set."""

    credal: CredalSet


DecisionRule = ExpectedUtilityRule | RiskWeightedRule | GammaMaximinRule


def _check_belief(problem: DecisionProblem, belief) -> tuple[float, ...]:
    belief = tuple(belief)
    if len(belief) != len(problem.states):
        raise DimensionMismatch(
            f"belief has {len(belief)} entries for {len(problem.states)} states"
        )
    return belief


def expected_utility(problem: DecisionProblem, act_index: int, belief) -> float:
    """Belief-weighted utility of one act."""
    belief = _check_belief(problem, belief)
    utilities = problem.acts[act_index].utilities
    return sum(b * u for b, u in zip(belief, utilities))


def best_act_eu(problem: DecisionProblem, belief) -> tuple[int, float]:
    """Act with maximal expected utility; ties go to the lowest index."""
    belief = _check_belief(problem, belief)
    best_index = 0
    best_value = -math.inf
    for i, act in enumerate(problem.acts):
        value = sum(b * u for b, u in zip(belief, act.utilities))
        if value > best_value:
            best_index, best_value = i, value
    return best_index, best_value


def signal_marginal(belief, channel: SignalChannel, signal: str) -> float:
    """P(signal) under the belief: sum over states of belief * likelihood."""
    if len(belief) != len(channel.likelihood):
        raise DimensionMismatch(
            f"belief has {len(belief)} entries for {len(channel.likelihood)} channel rows"
        )
    j = channel.signal_index(signal)
    return sum(b * row[j] for b, row in zip(belief, channel.likelihood))


def posterior(belief, channel: SignalChannel, signal: str) -> tuple[float, ...]:
    """Bayesian update of the belief on the observed signal."""
    marg = signal_marginal(belief, channel, signal)
    if marg <= 0.0:
        raise ZeroMarginal(f"signal {signal!r} has zero marginal probability")
    j = channel.signal_index(signal)
    return tuple(b * row[j] / marg for b, row in zip(belief, channel.likelihood))


def risk_weighted_value(prospect, risk: RiskFunction) -> float:
    """Rank-dependent value of a finite prospect of (utility, probability) atoms.

    Sort the outcomes ascending as u_1 <= ... <= u_n with probabilities
    p_1 ... p_n and return

        u_1 + sum_{i >= 2} r(p_i + ... + p_n) * (u_i - u_{i-1}),

    i.e. the guaranteed floor plus each utility increment weighted by the
    risk-transformed probability of doing at least that well. Zero-probability
    atoms are dropped; they cannot change the value.
    """
    pairs = sorted((float(u), float(p)) for u, p in prospect if p > 0.0)
    if not pairs:
        raise ValueError("prospect needs at least one positive-probability atom")
    value = pairs[0][0]
    tail = sum(p for _, p in pairs)
    for (u_prev, p_prev), (u, _) in zip(pairs, pairs[1:]):
        tail -= p_prev
        value += risk.weight(tail) * (u - u_prev)
    return value


def risk_weighted_eu(problem: DecisionProblem, act_index: int, belief, risk: RiskFunction) -> float:
    """Rank-dependent value of one act under the belief."""
    if risk is None:
        raise MissingRuleData("risk-weighted evaluation needs a risk function")
    belief = _check_belief(problem, belief)
    return risk_weighted_value(zip(problem.acts[act_index].utilities, belief), risk)


def gamma_maximin(problem: DecisionProblem, credal: CredalSet) -> tuple[int, float]:
    """Act maximizing the worst-case expected utility over the credal set.

    Ties go to the lowest index. A singleton credal set reduces to
    ``best_act_eu`` at that member.
    """
    if credal is None:
        raise MissingRuleData("gamma-maximin needs a credal set")
    for member in credal.members:
        if len(member) != len(problem.states):
            raise DimensionMismatch(
                f"credal member has {len(member)} entries for {len(problem.states)} states"
            )
    best_index = 0
    best_value = -math.inf
    for i, act in enumerate(problem.acts):
        worst = min(
            sum(b * u for b, u in zip(member, act.utilities)) for member in credal.members
        )
        if worst > best_value:
            best_index, best_value = i, worst
    return best_index, best_value


def misupdate(belief, channel: SignalChannel, signal: str, kind: MisupdateKind) -> tuple[float, ...]:
    """Belief produced by a failed conditionalization on the observed signal."""
    belief = tuple(belief)
    if len(belief) != len(channel.likelihood):
        raise DimensionMismatch(
            f"belief has {len(belief)} entries for {len(channel.likelihood)} channel rows"
        )
    if isinstance(kind, StayAtPrior):
        return belief
    if isinstance(kind, ComplementConditionalization):
        j = channel.signal_index(signal)
        comp = tuple(b * (1.0 - row[j]) for b, row in zip(belief, channel.likelihood))
        marg = sum(comp)
        if marg <= 0.0:
            raise ZeroMarginal(f"complement of signal {signal!r} has zero marginal probability")
        return tuple(x / marg for x in comp)
    vec = kind.posterior_for(signal)
    if len(vec) != len(belief):
        raise DimensionMismatch(
            f"custom posterior for {signal!r} has {len(vec)} entries for {len(belief)} states"
        )
    return vec
