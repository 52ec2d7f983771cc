"""Observable-versus-hidden price comparisons and figure data generation.

Consumers always weakly prefer to see prices before learning (strictly,
whenever trade occurs): price transparency removes the hold-up problem and
lets them learn efficiently.  A single firm shares that preference.  Market
firms do not: with active search their posted-price profit is pinned at 2c,
while the hidden-price profit is the price floor, which outgrows 2c once
the prior is high enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from .core import ModelParams, Regime
from .errors import InvalidParams, NoTrade
from .hidden import competition_hidden_solve, monopoly_mixed_solve
from .observable import ObservableEquilibrium, competition_solve, monopoly_equilibrium

__all__ = [
    "MarketOutcome",
    "RegimeComparison",
    "FigureKind",
    "FigureRow",
    "compare_monopoly",
    "compare_competition",
    "figure_data",
]


@dataclass(frozen=True)
class MarketOutcome:
    """One side of a comparison.

    For the observable side `price` is the posted equilibrium price; for the
    hidden side it is the lower bound of the price distribution (which also
    equals firm profit there).  No-trade sides report zeros.
    """

    price: float
    profit: float
    consumer_welfare: float


@dataclass(frozen=True)
class RegimeComparison:
    """Outcomes under both observation timings plus who prefers which.

    Preferences compare welfare/profit with ties counted as observable-
    preferred; the only ties in the model are no-trade-versus-no-trade.
    """

    observable: MarketOutcome
    hidden: MarketOutcome
    firm_prefers_observable: bool
    consumer_prefers_observable: bool


_NO_TRADE_OUTCOME = MarketOutcome(0.0, 0.0, 0.0)


def _compare(observable: MarketOutcome, hidden: MarketOutcome) -> RegimeComparison:
    return RegimeComparison(
        observable=observable,
        hidden=hidden,
        firm_prefers_observable=observable.profit >= hidden.profit,
        consumer_prefers_observable=observable.consumer_welfare >= hidden.consumer_welfare,
    )


def _observable_outcome(eq: ObservableEquilibrium) -> MarketOutcome:
    return MarketOutcome(eq.price, eq.profit, eq.consumer_welfare)


def compare_monopoly(mu: float, kappa: float) -> RegimeComparison:
    """Single-firm comparison at outside option 0.

    Whenever mu > -1/(4*kappa) (so trade occurs at least with posted prices),
    both the firm and the consumer prefer observable prices.
    """
    observable = _observable_outcome(monopoly_equilibrium(mu, kappa, 0.0))
    if mu > 0.0:
        eq = monopoly_mixed_solve(mu, kappa, 0.0)
        hidden = MarketOutcome(eq.p_lower, eq.profit, eq.consumer_welfare)
    else:
        hidden = _NO_TRADE_OUTCOME
    return _compare(observable, hidden)


def compare_competition(params: ModelParams) -> RegimeComparison:
    """Market comparison: consumers always prefer observable; firms flip in mu."""
    observable = _observable_outcome(competition_solve(params))
    try:
        eq = competition_hidden_solve(params)
        hidden = MarketOutcome(eq.p_lower, eq.profit, eq.consumer_welfare)
    except NoTrade:
        hidden = _NO_TRADE_OUTCOME
    return _compare(observable, hidden)


class FigureKind(str, Enum):
    """Which sweep-versus-kappa dataset to generate.

    STATICS: posted-price market outcomes (price, profit, welfare, duration).
    MONOPOLY_COMPARE: single-firm posted outcomes next to the hidden-price
    floor and profit.  COMPETITION_COMPARE: the market analogue.
    """

    STATICS = "statics"
    MONOPOLY_COMPARE = "monopoly"
    COMPETITION_COMPARE = "competition"


@dataclass(frozen=True)
class FigureRow:
    """One kappa grid point of a figure dataset (hidden columns optional)."""

    kappa: float
    regime: Regime
    price: float
    profit: float
    consumer_welfare: float
    expected_duration: float
    hidden_regime: Optional[Regime] = None
    hidden_p_lower: Optional[float] = None
    hidden_profit: Optional[float] = None


def _hidden_market_columns(params: ModelParams):
    try:
        eq = competition_hidden_solve(params)
    except NoTrade:
        return Regime.NO_TRADE, 0.0, 0.0
    regime = Regime.SEARCH_AND_LEARN if eq.active_search else Regime.LEARN_NO_SEARCH
    return regime, eq.p_lower, eq.profit


def _hidden_monopoly_columns(mu: float, kappa: float):
    if mu <= 0.0:
        return Regime.NO_TRADE, 0.0, 0.0
    eq = monopoly_mixed_solve(mu, kappa, 0.0)
    return Regime.LEARN_NO_SEARCH, eq.p_lower, eq.profit


def figure_data(
    figure: FigureKind,
    mu: float,
    c: float,
    kappa_grid: Sequence[float],
) -> List[FigureRow]:
    """Evaluate one figure dataset on a kappa grid.

    Every grid point must satisfy 0 < kappa < 1/(4c); the offending point is
    named otherwise.
    """
    figure = FigureKind(figure)
    if not c > 0.0:
        raise InvalidParams(f"search cost must be positive, got c={c}")
    kappa_max = 1.0 / (4.0 * c)
    rows: List[FigureRow] = []
    for kappa in kappa_grid:
        if not (0.0 < kappa < kappa_max):
            raise InvalidParams(
                f"grid point kappa={kappa} outside (0, 1/(4c)) = (0, {kappa_max})"
            )
        if figure is FigureKind.MONOPOLY_COMPARE:
            obs = monopoly_equilibrium(mu, kappa, 0.0)
        else:
            obs = competition_solve(ModelParams(mu=mu, c=c, kappa=kappa))
        hidden_regime = hidden_p = hidden_profit = None
        if figure is FigureKind.MONOPOLY_COMPARE:
            hidden_regime, hidden_p, hidden_profit = _hidden_monopoly_columns(mu, kappa)
        elif figure is FigureKind.COMPETITION_COMPARE:
            hidden_regime, hidden_p, hidden_profit = _hidden_market_columns(
                ModelParams(mu=mu, c=c, kappa=kappa)
            )
        rows.append(
            FigureRow(
                kappa=float(kappa),
                regime=obs.regime,
                price=obs.price,
                profit=obs.profit,
                consumer_welfare=obs.consumer_welfare,
                expected_duration=obs.expected_duration,
                hidden_regime=hidden_regime,
                hidden_p_lower=hidden_p,
                hidden_profit=hidden_profit,
            )
        )
    return rows
