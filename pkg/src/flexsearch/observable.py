"""Equilibria when each firm's price is observed on arrival, before learning.

A consumer who conjectures the symmetric price p faces three regimes as her
prior rises:

    mu - p <= -1/(4k)                      no trade, value 0
    -1/(4k) <= mu - p <= sqrt(c/k) - 1/(4k)  learn at one firm, value
        Phi_m = 1/(16k) + (mu-p)/2 + k*(mu-p)^2
    mu - p >= sqrt(c/k) - 1/(4k)           learn and search, value
        Phi_l = mu - p + c + 1/(4k) - sqrt(c/k)

Phi_l is the fixed point of Phi = W*(mu, p; Phi - c).  In the symmetric
pricing game the active-search equilibrium posts p = sqrt(c/k) with profit
2c per firm, while the no-search equilibrium replicates the interior
monopoly solution at outside option 0.  Boundary ties classify into the
regime with more activity: SearchAndLearn over LearnNoSearch over NoTrade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Optional, Tuple

import numpy as np

from .core import ModelParams, Regime
from .errors import InvalidParams, WrongRegime
from .learning import continuation_value

__all__ = [
    "ConsumerSearchValue",
    "ObservableEquilibrium",
    "ActivePattern",
    "KappaCasePartition",
    "ParamSigns",
    "ObfuscationResult",
    "consumer_search_value",
    "fixed_point_check",
    "monopoly_equilibrium",
    "monopoly_solve",
    "competition_solve",
    "deviation_profit",
    "equilibrium_foc_check",
    "kappa_case_partition",
    "comparative_static_signs",
    "obfuscation_corner",
]


@dataclass(frozen=True)
class ConsumerSearchValue:
    """Value of the optimal search-and-learning protocol at a conjectured price."""

    regime: Regime
    value: float


@dataclass(frozen=True)
class ObservableEquilibrium:
    """One equilibrium outcome with posted prices.

    stop_probability is the per-visit probability of purchase (the upper
    posterior's weight; 1 when the consumer buys without learning).  In
    SearchAndLearn the number of visits is geometric, so expected_duration
    equals 1/stop_probability there; in LearnNoSearch the consumer stops
    after one visit regardless of whether she buys.  NoTrade reports zeros
    so sweep tables stay rectangular.
    """

    regime: Regime
    price: float
    profit: float
    consumer_welfare: float
    stop_probability: float
    expected_duration: float


def _require_market_outside_zero(params: ModelParams) -> None:
    # the market analysis normalizes the exogenous outside option to zero;
    # a nonzero value only makes sense for the single-firm problem
    if params.outside != 0.0:
        raise InvalidParams(
            "market solvers require outside=0 (the model normalizes the "
            f"exogenous outside option), got {params.outside}"
        )


def consumer_search_value(params: ModelParams, price: float) -> ConsumerSearchValue:
    """Classify (params, price) into a regime and return the matching value."""
    _require_market_outside_zero(params)
    d = params.mu - price
    r = params.learning_halfwidth
    s = params.search_price
    if d >= s - r:
        value = d + params.c + r - s
        return ConsumerSearchValue(Regime.SEARCH_AND_LEARN, value)
    if d >= -r:
        value = 1.0 / (16.0 * params.kappa) + d / 2.0 + params.kappa * d * d
        return ConsumerSearchValue(Regime.LEARN_NO_SEARCH, value)
    return ConsumerSearchValue(Regime.NO_TRADE, 0.0)


def fixed_point_check(params: ModelParams, price: float) -> float:
    """|Phi_l - W*(mu, price; Phi_l - c)|: the recursion residual, <= 1e-10.

    Only defined in the SearchAndLearn regime, where the consumer's
    continuation option is her own search value net of the visit cost.
    """
    csv = consumer_search_value(params, price)
    if csv.regime is not Regime.SEARCH_AND_LEARN:
        raise WrongRegime(f"fixed point defined only under active search, got {csv.regime.value}")
    phi = csv.value
    return abs(phi - continuation_value(params, price, phi - params.c))


def monopoly_equilibrium(mu: float, kappa: float, outside: float = 0.0) -> ObservableEquilibrium:
    """Single-firm optimum with a posted price (no search cost involved).

    High priors (mu >= 3/(4k) + a) are priced to dissuade learning and the
    consumer buys outright; middle priors get the interior price
    1/(8k) + (mu-a)/2 with learning; mu <= a - 1/(4k) means no trade.
    Trade branches are labeled LearnNoSearch (a single visit, no search);
    stop_probability == 1 marks the buy-without-learning branch.
    """
    r = 1.0 / (4.0 * kappa)
    m = mu - outside
    if mu >= 3.0 * r + outside:
        price = m - r
        return ObservableEquilibrium(
            regime=Regime.LEARN_NO_SEARCH,
            price=price,
            profit=price,
            consumer_welfare=r + outside,
            stop_probability=1.0,
            expected_duration=1.0,
        )
    if mu >= outside - r:
        profit = (1.0 + 4.0 * kappa * m) ** 2 / (32.0 * kappa)
        return ObservableEquilibrium(
            regime=Regime.LEARN_NO_SEARCH,
            price=1.0 / (8.0 * kappa) + m / 2.0,
            profit=profit,
            consumer_welfare=profit / 2.0 + outside,
            stop_probability=0.25 + kappa * m,
            expected_duration=1.0,
        )
    return ObservableEquilibrium(Regime.NO_TRADE, 0.0, 0.0, 0.0, 0.0, 0.0)


def monopoly_solve(params: ModelParams) -> ObservableEquilibrium:
    """Monopoly optimum at the given primitives (c is irrelevant and ignored)."""
    return monopoly_equilibrium(params.mu, params.kappa, params.outside)


def competition_solve(params: ModelParams) -> ObservableEquilibrium:
    """Symmetric pure-strategy market equilibrium with posted prices."""
    _require_market_outside_zero(params)
    mu, c, kappa = params.mu, params.c, params.kappa
    r = params.learning_halfwidth
    s = params.search_price
    if mu >= 2.0 * s - r:
        stop = 2.0 * math.sqrt(c * kappa)
        return ObservableEquilibrium(
            regime=Regime.SEARCH_AND_LEARN,
            price=s,
            profit=2.0 * c,
            consumer_welfare=mu + r + c - 2.0 * s,
            stop_probability=stop,
            expected_duration=1.0 / stop,
        )
    if mu >= -r:
        profit = (1.0 + 4.0 * kappa * mu) ** 2 / (32.0 * kappa)
        return ObservableEquilibrium(
            regime=Regime.LEARN_NO_SEARCH,
            price=1.0 / (8.0 * kappa) + mu / 2.0,
            profit=profit,
            consumer_welfare=profit / 2.0,
            stop_probability=0.25 + kappa * mu,
            expected_duration=1.0,
        )
    return ObservableEquilibrium(Regime.NO_TRADE, 0.0, 0.0, 0.0, 0.0, 0.0)


def deviation_profit(params: ModelParams, price, conjectured: Optional[float] = None):
    """Profit of one firm posting `price` while all others post `conjectured`.

    Consumers hold the continuation value implied by the conjectured price,
    so the deviator sells with probability clip(1/2 + 2k*(mu - price - a), 0, 1)
    where a = Phi_l(conjectured) - c.  Vectorized over `price`.
    """
    _require_market_outside_zero(params)
    if conjectured is None:
        conjectured = params.search_price
    d = params.mu - conjectured
    r = params.learning_halfwidth
    a = d + r - params.search_price  # Phi_l(conjectured) - c
    price = np.asarray(price, dtype=float)
    buy = np.clip(0.5 + 2.0 * params.kappa * (params.mu - price - a), 0.0, 1.0)
    out = price * buy
    return float(out) if out.ndim == 0 else out


def equilibrium_foc_check(params: ModelParams, grid_n: int = 1000) -> float:
    """max over a price grid of deviation profit minus equilibrium profit.

    Scans [0, 2*sqrt(c/k)] with grid_n+1 points (the conjectured price sits
    exactly at the midpoint).  Nonpositive output certifies that the posted
    price is a global best response; raises WrongRegime outside active search.
    """
    if competition_solve(params).regime is not Regime.SEARCH_AND_LEARN:
        raise WrongRegime("first-order-condition check requires the active-search regime")
    p_star = params.search_price
    grid = np.linspace(0.0, 2.0 * p_star, grid_n + 1)
    profits = deviation_profit(params, grid, conjectured=p_star)
    return float(np.max(profits) - deviation_profit(params, p_star, conjectured=p_star))


class ActivePattern(str, Enum):
    """How the active-search region sits inside the admissible kappa range."""

    ALWAYS = "always_active"
    SPLIT = "split"
    LOW_ONLY = "low_kappa_only"
    LOW_ONLY_NEGATIVE_MU = "low_kappa_only_negative_mu"


@dataclass(frozen=True)
class KappaCasePartition:
    """Partition of kappa in (0, 1/(4c)) by whether active search occurs.

    Active search holds iff mu >= 2*sqrt(c/kappa) - 1/(4*kappa).  In sqrt(kappa)
    this is a quadratic, giving at most two switch points

        kappa_low/high = (8c - mu -/+ 4*sqrt((4c - mu)*c)) / (4*mu^2).

    ALWAYS: mu > 0, c <= mu/4, active everywhere.  SPLIT: mu > 0,
    mu/4 < c < mu/3, active on (0, kappa_low] and [kappa_high, 1/(4c)).
    LOW_ONLY (mu >= 0, c >= mu/3) and LOW_ONLY_NEGATIVE_MU (mu < 0): active
    only on (0, kappa_low].
    """

    mu: float
    c: float
    case_id: ActivePattern
    kappa_low: Optional[float]
    kappa_high: Optional[float]
    kappa_max: float
    active_intervals: Tuple[Tuple[float, float], ...]

    def active(self, kappa: float) -> bool:
        """Exact membership test (ties count as active)."""
        return self.mu >= 2.0 * math.sqrt(self.c / kappa) - 1.0 / (4.0 * kappa)


def kappa_case_partition(mu: float, c: float) -> KappaCasePartition:
    """Classify (mu, c) and return the kappa intervals with active search."""
    if not c > 0.0:
        raise InvalidParams(f"search cost must be positive, got c={c}")
    kappa_max = 1.0 / (4.0 * c)
    if mu > 0.0 and c <= mu / 4.0:
        return KappaCasePartition(
            mu, c, ActivePattern.ALWAYS, None, None, kappa_max, ((0.0, kappa_max),)
        )
    if mu > 0.0 and c < mu / 3.0:
        root = 4.0 * math.sqrt((4.0 * c - mu) * c)
        k_low = (8.0 * c - mu - root) / (4.0 * mu * mu)
        k_high = (8.0 * c - mu + root) / (4.0 * mu * mu)
        return KappaCasePartition(
            mu,
            c,
            ActivePattern.SPLIT,
            k_low,
            k_high,
            kappa_max,
            ((0.0, k_low), (k_high, kappa_max)),
        )
    if mu >= 0.0:
        if mu > 0.0:
            k_low = (8.0 * c - mu - 4.0 * math.sqrt((4.0 * c - mu) * c)) / (4.0 * mu * mu)
        else:
            k_low = 1.0 / (64.0 * c)  # limit of the quadratic-root formula at mu = 0
        return KappaCasePartition(
            mu, c, ActivePattern.LOW_ONLY, k_low, None, kappa_max, ((0.0, k_low),)
        )
    k_low = (8.0 * c - mu - 4.0 * math.sqrt((4.0 * c - mu) * c)) / (4.0 * mu * mu)
    return KappaCasePartition(
        mu, c, ActivePattern.LOW_ONLY_NEGATIVE_MU, k_low, None, kappa_max, ((0.0, k_low),)
    )


@dataclass(frozen=True)
class ParamSigns:
    """Analytic signs (-1, 0, +1) of price, profit and consumer welfare."""

    price_sign: int
    profit_sign: int
    welfare_sign: int


def comparative_static_signs(
    params: ModelParams, which: Literal["mu", "c", "kappa"]
) -> ParamSigns:
    """Analytic derivative signs of the market equilibrium at `params`.

    Active search: mu moves only welfare (+); c raises price and profit but
    lowers welfare; kappa lowers the price, leaves profit flat (profit is
    pinned at 2c), and lowers welfare iff kappa < 1/(16c).  Without active
    search: mu raises everything; c is irrelevant; kappa lowers the price
    while profit and welfare fall iff 4*kappa*|mu| < 1.  NoTrade: all zero.
    """
    regime = competition_solve(params).regime
    if regime is Regime.NO_TRADE:
        return ParamSigns(0, 0, 0)
    if which == "mu":
        if regime is Regime.SEARCH_AND_LEARN:
            return ParamSigns(0, 0, 1)
        return ParamSigns(1, 1, 1)
    if which == "c":
        if regime is Regime.SEARCH_AND_LEARN:
            return ParamSigns(1, 1, -1)
        return ParamSigns(0, 0, 0)
    if which == "kappa":
        if regime is Regime.SEARCH_AND_LEARN:
            pivot = 1.0 / (16.0 * params.c)
            welfare = 0 if params.kappa == pivot else (-1 if params.kappa < pivot else 1)
            return ParamSigns(-1, 0, welfare)
        t = 4.0 * params.kappa * abs(params.mu)
        trend = 0 if t == 1.0 else (-1 if t < 1.0 else 1)
        return ParamSigns(-1, trend, trend)
    raise InvalidParams(f"unknown parameter {which!r}; expected mu, c or kappa")


@dataclass(frozen=True)
class ObfuscationResult:
    kappa_star: float
    is_corner: bool


def obfuscation_corner(
    params: ModelParams,
    kappa_interval: Tuple[float, float],
    grid_n: int = 1001,
) -> ObfuscationResult:
    """Best friction level for a firm free to choose kappa from an interval.

    Holding the consumer's equilibrium continuation value fixed, a firm's
    problem is the single-firm one, whose maximal profit is convex in kappa
    on the learning branch and increasing on the no-learning branch; the
    argmax over any interval therefore sits at an endpoint.  Scans grid_n
    evenly spaced points and reports the argmax and whether it is a corner.
    """
    lo, hi = float(kappa_interval[0]), float(kappa_interval[1])
    if not (0.0 < lo <= hi):
        raise InvalidParams(f"kappa interval must satisfy 0 < lo <= hi, got [{lo}, {hi}]")
    if hi >= 1.0 / (4.0 * params.c):
        raise InvalidParams(
            f"kappa interval endpoint {hi} is incompatible with c={params.c}"
        )
    a = max(0.0, competition_solve(params).consumer_welfare - params.c)
    if lo == hi:
        return ObfuscationResult(kappa_star=lo, is_corner=True)
    grid = np.linspace(lo, hi, grid_n)
    profits = np.array([monopoly_equilibrium(params.mu, k, a).profit for k in grid])
    idx = int(np.argmax(profits))
    return ObfuscationResult(
        kappa_star=float(grid[idx]),
        is_corner=idx == 0 or idx == grid_n - 1,
    )
