"""A consumer's problem at a single firm: optimal learning and its value.

Facing price p with an option a >= 0 in hand, stopping at posterior value u
pays, net of the posterior-variance learning cost,

    W(u) = a - kappa*(u - mu)^2        if u - p <= a   (walk away)
           u - p - kappa*(u - mu)^2    if u - p >= a   (buy),

continuous at u = a + p.  The optimal experiment concavifies W: either a
corner (buy immediately / take the option) or a two-point posterior spread

    u_low = a + p - 1/(4*kappa),  u_high = a + p + 1/(4*kappa),
    p_high = 1/2 + 2*kappa*(mu - p - a).

Behaving optimally the consumer earns

    W*(mu, p; a) = a                       if mu <= a + p - 1/(4*kappa)
                   mu - p                  if mu >= a + p + 1/(4*kappa)
                   1/(16*kappa) + (mu - p + a)/2 + kappa*(mu - p - a)^2  between.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Action, LearningPolicy, ModelParams

__all__ = [
    "StoppingPayoff",
    "PolicyCostReport",
    "optimal_policy",
    "continuation_value",
    "policy_cost",
]


@dataclass(frozen=True)
class StoppingPayoff:
    """Evaluator for the two-branch stopping payoff W at one firm."""

    price: float
    outside: float
    params: ModelParams

    def value(self, u):
        """W(u); accepts a scalar or a numpy array."""
        u = np.asarray(u, dtype=float)
        mu, kappa = self.params.mu, self.params.kappa
        penalty = kappa * (u - mu) ** 2
        out = np.where(
            u - self.price <= self.outside,
            self.outside - penalty,
            u - self.price - penalty,
        )
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PolicyCostReport:
    """Expected learning cost and value of a policy at one firm.

    expected_cost = kappa * E[(x - mu)^2] (zero for the corner actions),
    gross_value   = expected stopping payoff before learning costs,
    net_value     = gross_value - expected_cost.
    """

    policy: LearningPolicy
    expected_cost: float
    gross_value: float
    net_value: float


def optimal_policy(params: ModelParams, price: float, outside: float) -> LearningPolicy:
    """Optimal action at a firm charging `price` with option `outside` in hand.

    Boundary ties are resolved toward Learn (the experiment is degenerate
    there, with p_high equal to 0 or 1).
    """
    d = params.mu - price - outside
    r = params.learning_halfwidth
    if d < -r:
        return LearningPolicy.take_outside()
    if d > r:
        return LearningPolicy.buy_now()
    p_high = 0.5 + 2.0 * params.kappa * d
    # rounding guard at the band edges; the branch already certifies [0, 1]
    p_high = min(1.0, max(0.0, p_high))
    return LearningPolicy.learn(
        u_low=outside + price - r,
        u_high=outside + price + r,
        p_high=p_high,
    )


def continuation_value(params: ModelParams, price: float, outside: float) -> float:
    """W*(mu, price; outside), the value of behaving optimally at this firm."""
    d = params.mu - price - outside
    r = params.learning_halfwidth
    if d <= -r:
        return outside
    if d >= r:
        return params.mu - price
    return (
        1.0 / (16.0 * params.kappa)
        + (params.mu - price + outside) / 2.0
        + params.kappa * d * d
    )


def policy_cost(
    params: ModelParams,
    policy: LearningPolicy,
    price: float,
    outside: float,
) -> PolicyCostReport:
    """Price a policy: expected learning cost, gross and net value.

    For a two-point experiment the consumer buys at u_high and takes the
    option at u_low (ties in the stopping payoff break toward purchase,
    matching the supporting segment of the concavification).  Raises
    InconsistentPolicy when a Learn policy is not a mean-mu experiment.
    """
    mu, kappa = params.mu, params.kappa
    if policy.action is Action.BUY_NOW:
        value = mu - price
        return PolicyCostReport(policy, 0.0, value, value)
    if policy.action is Action.TAKE_OUTSIDE:
        return PolicyCostReport(policy, 0.0, outside, outside)
    policy.check_learn_consistency(mu)
    ph = policy.p_high
    cost = kappa * (
        ph * (policy.u_high - mu) ** 2 + (1.0 - ph) * (policy.u_low - mu) ** 2
    )
    gross = ph * (policy.u_high - price) + (1.0 - ph) * outside
    return PolicyCostReport(policy, cost, gross, gross - cost)
