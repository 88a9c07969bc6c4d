"""Exception types shared across the package."""


class ConditioningOnNull(ValueError):
    """Conditioning event has zero probability."""


class ZeroMarginal(ValueError):
    """Signal (or signal complement) has zero marginal probability."""


class DimensionMismatch(ValueError):
    """Vector length does not match the state space."""


class MissingRuleData(ValueError):
    """Decision rule lacks its auxiliary data (risk function, credal set, table entry)."""


class RuleCannotBeAverse(ValueError):
    """Aversion search requested for a rule that provably never rejects information."""
