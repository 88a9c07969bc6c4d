"""Independent reference implementations used as test oracles.

These deliberately re-derive every quantity from the raw fields of the data
types, through different formulations than the package uses (per-atom
decision weights instead of sorted increments, explicit joint enumeration
instead of per-signal aggregation, bisection instead of the closed form),
so agreement is evidence rather than tautology.
"""

from __future__ import annotations

from offswitch_lab.core import (
    ComplementConditionalization,
    CredalSet,
    CustomPosterior,
    DecisionProblem,
    SignalChannel,
    StayAtPrior,
)
from offswitch_lab.distributions import UtilityDistribution, mean
from offswitch_lab.offswitch import noisy_defer_value


def reu_decumulative(prospect, risk) -> float:
    """Rank-dependent value via per-atom decision weights w_i = r(T_i) - r(T_i+1),
    where T_i is the probability of doing at least as well as outcome i."""
    pairs = sorted((float(u), float(p)) for u, p in prospect if p > 0.0)
    n = len(pairs)
    tails = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tails[i] = tails[i + 1] + pairs[i][1]
    return sum(
        (risk.weight(tails[i]) - risk.weight(tails[i + 1])) * pairs[i][0] for i in range(n)
    )


def eu_of(problem: DecisionProblem, act_index: int, belief) -> float:
    return sum(b * u for b, u in zip(belief, problem.acts[act_index].utilities))


def eu_best(problem: DecisionProblem, belief) -> tuple[int, float]:
    values = [eu_of(problem, i, belief) for i in range(len(problem.acts))]
    best = max(values)
    return values.index(best), best


def bayes(belief, channel: SignalChannel, j: int) -> tuple[list[float], float]:
    """Posterior and marginal for signal column j, straight from the joint."""
    joint = [b * row[j] for b, row in zip(belief, channel.likelihood)]
    marg = sum(joint)
    if marg <= 0.0:
        return [], 0.0
    return [x / marg for x in joint], marg


def plan_value_eu(problem: DecisionProblem, channel: SignalChannel, plan) -> float:
    """Expected utility of a fixed signal->act plan by explicit joint enumeration."""
    total = 0.0
    for w, b in enumerate(problem.prior):
        for j in range(len(channel.signals)):
            total += b * channel.likelihood[w][j] * problem.acts[plan[j]].utilities[w]
    return total


def reu_voi(problem: DecisionProblem, channel: SignalChannel, risk) -> float:
    """Risk-weighted learn-minus-now gap, rebuilt from scratch."""
    belief = problem.prior
    joint_atoms = []
    for j in range(len(channel.signals)):
        post, marg = bayes(belief, channel, j)
        if marg <= 0.0:
            continue
        scores = [
            reu_decumulative(zip(problem.acts[i].utilities, post), risk)
            for i in range(len(problem.acts))
        ]
        chosen = scores.index(max(scores))
        for w, b in enumerate(belief):
            p = b * channel.likelihood[w][j]
            if p > 0.0:
                joint_atoms.append((problem.acts[chosen].utilities[w], p))
    learning = reu_decumulative(joint_atoms, risk)
    now = max(
        reu_decumulative(zip(problem.acts[i].utilities, belief), risk)
        for i in range(len(problem.acts))
    )
    return learning - now


def gamma_best(problem: DecisionProblem, members) -> tuple[int, float]:
    values = [
        min(eu_of(problem, i, m) for m in members) for i in range(len(problem.acts))
    ]
    best = max(values)
    return values.index(best), best


def gamma_voi(problem: DecisionProblem, channel: SignalChannel, credal: CredalSet) -> float:
    """Worst-case-over-members learn-minus-now gap, rebuilt from scratch."""
    plan = {}
    for j in range(len(channel.signals)):
        posts = []
        for m in credal.members:
            post, marg = bayes(m, channel, j)
            if marg > 0.0:
                posts.append(post)
        if posts:
            plan[j] = gamma_best(problem, posts)[0]
    member_scores = []
    for m in credal.members:
        score = 0.0
        for j, act_index in plan.items():
            post, marg = bayes(m, channel, j)
            if marg > 0.0:
                score += marg * eu_of(problem, act_index, post)
        member_scores.append(score)
    return min(member_scores) - gamma_best(problem, credal.members)[1]


def faulty_voi(problem: DecisionProblem, channel: SignalChannel, updater) -> float:
    """Learn-minus-now gap for an updater that misfires with probability q."""
    belief = problem.prior
    q = updater.q
    kind = updater.kind
    learning = 0.0
    for j, signal in enumerate(channel.signals):
        post, marg = bayes(belief, channel, j)
        if marg <= 0.0:
            continue
        good_index, good_value = eu_best(problem, post)
        if isinstance(kind, StayAtPrior):
            wrong = list(belief)
        elif isinstance(kind, ComplementConditionalization):
            comp = [b * (1.0 - row[j]) for b, row in zip(belief, channel.likelihood)]
            comp_total = sum(comp)
            wrong = [x / comp_total for x in comp]
        else:
            assert isinstance(kind, CustomPosterior)
            wrong = list(kind.posterior_for(signal))
        wrong_index, _ = eu_best(problem, wrong)
        learning += marg * ((1.0 - q) * good_value + q * eu_of(problem, wrong_index, post))
    return learning - eu_best(problem, belief)[1]


def bisect_defer_threshold(prior: UtilityDistribution, tol: float = 1e-12) -> float | None:
    """Root of defer(eps) = best-immediate-value on [0, 1] by bisection."""
    target = max(mean(prior), 0.0)

    def gap(eps: float) -> float:
        return noisy_defer_value(prior, eps) - target

    if gap(1.0) > 0.0:
        return None
    lo, hi = 0.0, 1.0
    if gap(lo) <= 0.0:
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi
