"""Exception hierarchy shared by all solvers."""


class FlexSearchError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(FlexSearchError):
    """A primitive violates the model's standing assumptions."""


class NonPositiveCost(ValidationError):
    pass


class NonPositiveKappa(ValidationError):
    pass


class SearchCostTooHigh(ValidationError):
    """c >= 1/(4*kappa); active search can never exist."""


class NegativeOutside(ValidationError):
    pass


class InvalidParams(ValidationError):
    """A call-specific precondition fails (grids, intervals, step sizes...)."""


class NoTrade(FlexSearchError):
    """The requested equilibrium object does not exist because no trade occurs."""


class WrongRegime(FlexSearchError):
    """A diagnostic was requested outside the regime where it is defined."""


class InconsistentPolicy(FlexSearchError):
    """A hand-built learning policy violates mean preservation or p_high in [0, 1]."""


class BracketFailure(FlexSearchError):
    """A root bracket did not straddle a sign change (indicates a bug)."""


class InvalidBarriers(FlexSearchError):
    """Two-barrier simulation called with barriers not straddling the start."""


class OutOfRange(FlexSearchError):
    """Envelope query point lies outside the sampled span."""
