"""Model primitives shared by every solver.

A market is described by four numbers: the prior product value mu (may be
negative), the per-visit search cost c > 0, the information friction
kappa > 0 (cost per unit of posterior variance, kappa = gamma/sigma^2), and
an outside option a >= 0.  The standing assumption c < 1/(4*kappa) keeps
active search feasible; construction fails otherwise.

Only kappa matters to the solvers; gamma and sigma appear separately solely
in the Monte Carlo oracle configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    InconsistentPolicy,
    NegativeOutside,
    NonPositiveCost,
    NonPositiveKappa,
    SearchCostTooHigh,
)


class Regime(str, Enum):
    """Market regime at a parameter point.

    NoTrade: no transactions at all.  LearnNoSearch: consumers learn at a
    single firm but never move on.  SearchAndLearn: consumers both learn and
    actively search across firms.
    """

    NO_TRADE = "NoTrade"
    LEARN_NO_SEARCH = "LearnNoSearch"
    SEARCH_AND_LEARN = "SearchAndLearn"


class Action(str, Enum):
    """What a consumer does at a firm before any information is acquired."""

    BUY_NOW = "BuyNow"
    TAKE_OUTSIDE = "TakeOutside"
    LEARN = "Learn"


@dataclass(frozen=True)
class ModelParams:
    """Validated model primitives. Construct through :func:`validate`."""

    mu: float
    c: float
    kappa: float
    outside: float = 0.0

    @property
    def learning_halfwidth(self) -> float:
        """Half-width 1/(4*kappa) of the band of priors where learning pays."""
        return 1.0 / (4.0 * self.kappa)

    @property
    def search_price(self) -> float:
        """sqrt(c/kappa), the posted price in the active-search equilibrium."""
        return math.sqrt(self.c / self.kappa)


def validate(mu: float, c: float, kappa: float, outside: float = 0.0) -> ModelParams:
    """Check the standing assumptions and return an immutable parameter record.

    Raises NonPositiveCost, NonPositiveKappa, SearchCostTooHigh (c >= 1/(4*kappa))
    or NegativeOutside, naming the violated constraint.  mu may be any real.
    Comparisons are exact floating-point comparisons against the computed
    threshold; boundary ties are rejected (c == 1/(4*kappa) fails).
    """
    mu = float(mu)
    c = float(c)
    kappa = float(kappa)
    outside = float(outside)
    if not c > 0.0:
        raise NonPositiveCost(f"search cost must be positive, got c={c}")
    if not kappa > 0.0:
        raise NonPositiveKappa(f"information friction must be positive, got kappa={kappa}")
    if c >= 1.0 / (4.0 * kappa):
        raise SearchCostTooHigh(
            f"search cost too high: c={c} >= 1/(4*kappa)={1.0 / (4.0 * kappa)}"
        )
    if outside < 0.0:
        raise NegativeOutside(f"outside option must be nonnegative, got {outside}")
    return ModelParams(mu=mu, c=c, kappa=kappa, outside=outside)


@dataclass(frozen=True)
class LearningPolicy:
    """A consumer's optimal move at one firm.

    Either an immediate action (buy now / take the outside option) or a
    two-point experiment: posteriors u_low < u_high spanning 1/(2*kappa),
    reached with probabilities (1 - p_high, p_high).  Mean preservation
    p_high*u_high + (1-p_high)*u_low == mu is the martingale property of
    posteriors and is validated wherever a policy is priced.
    """

    action: Action
    u_low: float = math.nan
    u_high: float = math.nan
    p_high: float = math.nan

    @staticmethod
    def buy_now() -> "LearningPolicy":
        return LearningPolicy(Action.BUY_NOW)

    @staticmethod
    def take_outside() -> "LearningPolicy":
        return LearningPolicy(Action.TAKE_OUTSIDE)

    @staticmethod
    def learn(u_low: float, u_high: float, p_high: float) -> "LearningPolicy":
        return LearningPolicy(Action.LEARN, u_low=u_low, u_high=u_high, p_high=p_high)

    def check_learn_consistency(self, mu: float) -> None:
        """Raise InconsistentPolicy unless this Learn policy is a mean-mu experiment."""
        if self.action is not Action.LEARN:
            return
        if not (0.0 <= self.p_high <= 1.0):
            raise InconsistentPolicy(f"p_high={self.p_high} outside [0, 1]")
        mean = self.p_high * self.u_high + (1.0 - self.p_high) * self.u_low
        scale = max(1.0, abs(mu), abs(self.u_low), abs(self.u_high))
        if abs(mean - mu) > 1e-9 * scale:
            raise InconsistentPolicy(
                f"two-point experiment has mean {mean}, expected mu={mu}"
            )
