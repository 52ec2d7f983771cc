"""Mixed-strategy equilibria when prices are revealed only after learning.

Learning before seeing the price creates a hold-up problem: no deterministic
price is consistent with trade, so firms mix.  In equilibrium consumer
valuations follow a truncated Pareto law

    F(x) = 1 - (x_lower - a)/(x - a)   on [x_lower, x_upper),

with an atom at x_upper, which makes demand unit-elastic and firms
indifferent across their uniform price support

    G(p) = 2*kappa*(p - p_lower)       on [p_lower, p_lower + 1/(2*kappa)].

The price floor solves an implicit equation: for a single firm,
p*log(1 + 1/(2*kappa*p)) + p = mu - a; in the search market,
p*log(1 + 1/(2*kappa*p)) = sqrt(c/kappa).  Both left sides are strictly
increasing in p, so a fully converged bisection pins the root to machine
precision.  Consumer payoffs are affine in the realized value across the
support, with slope 2*kappa*(mu - x_lower) and intercept
kappa*(x_lower^2 - mu^2) + a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .core import ModelParams
from .errors import BracketFailure, InvalidParams, NoTrade

__all__ = [
    "AffineValueLine",
    "MixedEquilibrium",
    "ActiveSearchRegion",
    "WelfareTrends",
    "monopoly_price_equation",
    "competition_price_equation",
    "solve_monopoly_lower_price",
    "monopoly_mixed_solve",
    "solve_competition_lower_price",
    "competition_hidden_solve",
    "active_search_region",
    "kappa_turning_point",
    "price_kappa_slope_condition",
    "monopoly_welfare_slope_condition",
    "competition_welfare_slope_condition",
    "hidden_welfare_trends",
]


def _bisect(f: Callable[[float], float], lo: float, hi: float, max_iter: int = 200) -> float:
    """Fully converged bisection on a bracket with a sign change.

    Runs until the bracket collapses to adjacent floats (or max_iter) and
    returns the endpoint with the smaller |f|, so residuals are limited only
    by the conditioning of f itself.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise BracketFailure(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return lo if abs(flo) <= abs(fhi) else hi


def monopoly_price_equation(p: float, mu: float, kappa: float, outside: float = 0.0) -> float:
    """p*log(1 + 1/(2*kappa*p)) + p - (mu - outside); root is the price floor."""
    return p * math.log1p(1.0 / (2.0 * kappa * p)) + p - (mu - outside)


def competition_price_equation(p: float, c: float, kappa: float) -> float:
    """p*log(1 + 1/(2*kappa*p)) - sqrt(c/kappa); root is the market price floor."""
    return p * math.log1p(1.0 / (2.0 * kappa * p)) - math.sqrt(c / kappa)


def solve_monopoly_lower_price(mu: float, kappa: float, outside: float = 0.0) -> float:
    """Price floor of the single firm's mixture; unique root in (0, mu - outside).

    Raises NoTrade when mu <= outside (only no-trade deterministic pricing
    exists there).
    """
    if not kappa > 0.0:
        raise InvalidParams(f"kappa must be positive, got {kappa}")
    gap = mu - outside
    if gap <= 0.0:
        raise NoTrade(f"no trade with hidden prices: mu={mu} <= outside={outside}")
    return _bisect(
        lambda p: monopoly_price_equation(p, mu, kappa, outside),
        1e-12 * gap,
        gap,
    )


def solve_competition_lower_price(c: float, kappa: float) -> float:
    """Price floor of the market mixture; unique positive root, needs c < 1/(4*kappa)."""
    if not (c > 0.0 and kappa > 0.0):
        raise InvalidParams(f"need c > 0 and kappa > 0, got c={c}, kappa={kappa}")
    target = math.sqrt(c / kappa)
    if c >= 1.0 / (4.0 * kappa):
        # the equation's p -> inf limit is 1/(2*kappa) <= sqrt(c/kappa): no root
        raise InvalidParams(f"no price floor exists: c={c} >= 1/(4*kappa)={1.0 / (4.0 * kappa)}")
    hi = max(target, 1.0 / (2.0 * kappa))
    for _ in range(200):
        if competition_price_equation(hi, c, kappa) > 0.0:
            break
        hi *= 2.0
    else:
        raise BracketFailure("could not bracket the market price floor")
    return _bisect(lambda p: competition_price_equation(p, c, kappa), 1e-12 * target, hi)


@dataclass(frozen=True)
class AffineValueLine:
    """Consumer payoff as a function of realized value: slope*x + intercept."""

    slope: float
    intercept: float


@dataclass(frozen=True)
class MixedEquilibrium:
    """A hidden-price equilibrium: value law F, price law G, payoffs.

    outside_effective is the option the consumer holds while learning: the
    exogenous outside option for a single firm, or her continuation value
    (search value net of the visit cost) in the market.  indifference_profit
    is the constant profit earned at every price in the support; it equals
    p_lower and x_lower - outside_effective.
    """

    mu: float
    kappa: float
    outside_effective: float
    p_lower: float
    p_upper: float
    x_lower: float
    x_upper: float
    profit: float
    consumer_welfare: float
    value_line: AffineValueLine
    active_search: bool
    indifference_profit: float

    @property
    def atom_mass(self) -> float:
        """Mass F places on the top value x_upper."""
        return (self.x_lower - self.outside_effective) / (
            self.x_upper - self.outside_effective
        )

    def value_cdf(self, x):
        """F(x), right-continuous, with the atom at x_upper included."""
        x = np.asarray(x, dtype=float)
        lam = self.indifference_profit
        inner = 1.0 - lam / np.maximum(x - self.outside_effective, lam)
        out = np.where(x < self.x_lower, 0.0, np.where(x >= self.x_upper, 1.0, inner))
        return float(out) if out.ndim == 0 else out

    def value_cdf_left(self, x):
        """Left limit F(x-); the atom at x_upper still counts as demand there."""
        x = np.asarray(x, dtype=float)
        lam = self.indifference_profit
        inner = 1.0 - lam / np.maximum(x - self.outside_effective, lam)
        out = np.where(x <= self.x_lower, 0.0, np.where(x > self.x_upper, 1.0, inner))
        return float(out) if out.ndim == 0 else out

    def value_quantile(self, q):
        """Smallest x with F(x) >= q."""
        q = np.asarray(q, dtype=float)
        if np.any((q < 0.0) | (q > 1.0)):
            raise InvalidParams("quantile levels must lie in [0, 1]")
        lam = self.indifference_profit
        continuous = self.outside_effective + lam / np.maximum(1.0 - q, lam / (self.x_upper - self.outside_effective))
        out = np.minimum(continuous, self.x_upper)
        return float(out) if out.ndim == 0 else out

    def price_cdf(self, p):
        """G(p) = 2*kappa*(p - p_lower), uniform on the price support."""
        p = np.asarray(p, dtype=float)
        out = np.where(
            p >= self.p_upper,
            1.0,
            np.clip(2.0 * self.kappa * (p - self.p_lower), 0.0, 1.0),
        )
        return float(out) if out.ndim == 0 else out

    def price_quantile(self, q):
        q = np.asarray(q, dtype=float)
        if np.any((q < 0.0) | (q > 1.0)):
            raise InvalidParams("quantile levels must lie in [0, 1]")
        out = self.p_lower + q / (2.0 * self.kappa)
        return float(out) if out.ndim == 0 else out


def _assemble(mu, kappa, outside_eff, p_lower, welfare, active) -> MixedEquilibrium:
    p_upper = p_lower + 1.0 / (2.0 * kappa)
    x_lower = p_lower + outside_eff
    x_upper = p_upper + outside_eff
    line = AffineValueLine(
        slope=2.0 * kappa * (mu - x_lower),
        intercept=kappa * (x_lower * x_lower - mu * mu) + outside_eff,
    )
    return MixedEquilibrium(
        mu=mu,
        kappa=kappa,
        outside_effective=outside_eff,
        p_lower=p_lower,
        p_upper=p_upper,
        x_lower=x_lower,
        x_upper=x_upper,
        profit=p_lower,
        consumer_welfare=welfare,
        value_line=line,
        active_search=active,
        indifference_profit=p_lower,
    )


def monopoly_mixed_solve(mu: float, kappa: float, outside: float = 0.0) -> MixedEquilibrium:
    """The single firm's hidden-price equilibrium (raises NoTrade if mu <= outside)."""
    p_lower = solve_monopoly_lower_price(mu, kappa, outside)
    welfare = kappa * (mu - p_lower - outside) ** 2 + outside
    return _assemble(mu, kappa, outside, p_lower, welfare, active=False)


def competition_hidden_solve(params: ModelParams) -> MixedEquilibrium:
    """Market equilibrium with hidden prices.

    Active search requires mu - sqrt(c/kappa) > p_lower strictly; otherwise
    consumers visit one firm and the single-firm equilibrium at outside 0
    applies.  Raises NoTrade when mu <= 0.
    """
    if params.outside != 0.0:
        raise InvalidParams(
            f"market solvers require outside=0, got {params.outside}"
        )
    mu, c, kappa = params.mu, params.c, params.kappa
    if mu <= 0.0:
        raise NoTrade(f"no trade with hidden prices in the market: mu={mu} <= 0")
    p_lower = solve_competition_lower_price(c, kappa)
    s = params.search_price
    if mu - s > p_lower:
        welfare = mu - p_lower + c - s
        return _assemble(mu, kappa, welfare - c, p_lower, welfare, active=True)
    return monopoly_mixed_solve(mu, kappa, 0.0)


@dataclass(frozen=True)
class ActiveSearchRegion:
    """Frictions supporting active search with hidden prices, at fixed (c, mu).

    mu_threshold is the smallest prior for which some kappa supports active
    search; above it the active region is the interval [kappa_low, kappa_high].
    """

    mu_threshold: float
    kappa_low: Optional[float]
    kappa_high: Optional[float]


def _active_search_boundary(c: float, kappa: float) -> float:
    """p_lower(c, kappa) + sqrt(c/kappa); active search needs mu above this."""
    return solve_competition_lower_price(c, kappa) + math.sqrt(c / kappa)


def active_search_region(c: float, mu: float) -> ActiveSearchRegion:
    """Locate the kappa interval with active search, or report that none exists.

    The boundary B(kappa) = p_lower + sqrt(c/kappa) is strictly convex and
    explodes at both ends of (0, 1/(4c)), so its minimum (a 512-point
    log-grid refined by golden-section to 1e-10 relative) determines
    mu_threshold, and bisection on each flank finds the crossing points
    B = mu when mu exceeds it.
    """
    if not (c > 0.0 and mu > 0.0):
        raise InvalidParams(f"need c > 0 and mu > 0, got c={c}, mu={mu}")
    kappa_max = 1.0 / (4.0 * c)
    grid = np.geomspace(kappa_max * 1e-9, kappa_max * (1.0 - 1e-9), 512)
    values = np.array([_active_search_boundary(c, k) for k in grid])
    i = int(np.argmin(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    # golden-section on the strictly convex boundary
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = _active_search_boundary(c, x1)
    f2 = _active_search_boundary(c, x2)
    while b - a > 1e-10 * b:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = _active_search_boundary(c, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = _active_search_boundary(c, x2)
    k_min = 0.5 * (a + b)
    mu_threshold = float(_active_search_boundary(c, k_min))
    if mu <= mu_threshold:
        return ActiveSearchRegion(mu_threshold, None, None)

    def crossing(k: float) -> float:
        return _active_search_boundary(c, k) - mu

    left = k_min
    for _ in range(200):
        if crossing(left) >= 0.0:
            break
        left *= 0.5
    else:
        raise BracketFailure("no lower crossing found for the active-search boundary")
    right = k_min
    for _ in range(200):
        if crossing(right) >= 0.0:
            break
        right = kappa_max - 0.5 * (kappa_max - right)
    else:
        raise BracketFailure("no upper crossing found for the active-search boundary")
    kappa_low = _bisect(crossing, float(left), float(k_min))
    kappa_high = _bisect(crossing, float(k_min), float(right))
    return ActiveSearchRegion(float(mu_threshold), kappa_low, kappa_high)


def price_kappa_slope_condition(c: float, kappa: float) -> float:
    """log(sqrt(c*k)) + 2 - 2*sqrt(c*k); the market price floor falls in kappa iff <= 0."""
    s = math.sqrt(c * kappa)
    return math.log(s) + 2.0 - 2.0 * s


def kappa_turning_point(c: float) -> float:
    """Friction level where the market price floor switches from falling to rising.

    Solves log(s) + 2 - 2*s = 0 in s = sqrt(c*kappa) on (0, 1/2) by bisection
    (the expression is strictly increasing there), then maps back to kappa.
    """
    if not c > 0.0:
        raise InvalidParams(f"search cost must be positive, got c={c}")
    s = _bisect(lambda t: math.log(t) + 2.0 - 2.0 * t, 1e-300, 0.5)
    return s * s / c


def monopoly_welfare_slope_condition(z: float) -> float:
    """Sign expression for d(consumer welfare)/d(kappa) at a single firm.

    Evaluated at z = 2*kappa*p_lower:
    (1/2)*log((z+1)/z) - 1/((z+1)*log((z+1)/z) + z); welfare rises iff >= 0,
    which happens iff kappa*p_lower is below roughly 0.337.
    """
    log_ratio = math.log1p(1.0 / z)
    return 0.5 * log_ratio - 1.0 / ((z + 1.0) * log_ratio + z)


def competition_welfare_slope_condition(x: float) -> float:
    """Sign expression for d(consumer welfare)/d(kappa) in the active-search market.

    Evaluated at x = kappa*p_lower:
    (1 + 1/(2x))*log(1 + 1/(2x)) + 1 - 1/(x*log(1 + 1/(2x))); welfare rises iff >= 0.
    """
    log_term = math.log1p(1.0 / (2.0 * x))
    return (1.0 + 1.0 / (2.0 * x)) * log_term + 1.0 - 1.0 / (x * log_term)


@dataclass(frozen=True)
class WelfareTrends:
    monopoly_welfare_increasing: bool
    competition_welfare_increasing: bool


def hidden_welfare_trends(params: ModelParams) -> WelfareTrends:
    """Whether hidden-price consumer welfare is locally increasing in kappa.

    The single-firm branch evaluates the slope condition at z = 2*kappa*
    p_lower (needs mu > outside).  The market branch evaluates its condition
    at x = kappa*p_lower, which is meaningful in the active-search region.
    """
    p_m = solve_monopoly_lower_price(params.mu, params.kappa, params.outside)
    mono = monopoly_welfare_slope_condition(2.0 * params.kappa * p_m) >= 0.0
    p_c = solve_competition_lower_price(params.c, params.kappa)
    comp = competition_welfare_slope_condition(params.kappa * p_c) >= 0.0
    return WelfareTrends(mono, comp)


def perturbed(eq: MixedEquilibrium, p_lower_shift: float) -> MixedEquilibrium:
    """Copy of an equilibrium with the price floor shifted; for checker probes."""
    return replace(eq, p_lower=eq.p_lower + p_lower_shift)
