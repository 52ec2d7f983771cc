"""Independent verification machinery.

Three oracles check the closed forms along routes that never reuse them:

* a discrete +/-z random-walk simulation of attribute inspection between two
  stopping barriers (first-passage probabilities and costs versus the
  two-point experiment and the posterior-variance cost);
* a grid concave-envelope (upper convex hull) construction validating the
  learning value function;
* numerical equilibrium-condition checkers for the hidden-price mixtures
  (firm indifference, affine consumer payoff, mean preservation of the
  value law).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .core import ModelParams
from .errors import InvalidBarriers, InvalidParams, OutOfRange
from .hidden import MixedEquilibrium
from .runtime import parallel_map

__all__ = [
    "RandomWalkConfig",
    "WalkReport",
    "simulate_two_barrier",
    "upper_hull",
    "concave_envelope",
    "MixedCheckReport",
    "check_mixed_equilibrium",
]

# paths are split into fixed blocks; block b draws from a Philox stream keyed
# by (seed, b), so serial and parallel runs consume identical randomness and
# the integer partial sums make the reduction order-independent
_BLOCK = 4096
# steps are simulated _CHUNK at a time per surviving path; draws past a
# path's absorption are discarded, which only advances the block's stream
_CHUNK = 32


@dataclass(frozen=True)
class RandomWalkConfig:
    """Discretization of the attribute-inspection process.

    Each inspected attribute moves the running valuation by +/- z with
    z = sigma*sqrt(dt) and costs gamma*dt (gamma is the flow cost, so
    gamma/sigma^2 is the information friction being verified).  seed keys a
    counter-based Philox stream; identical configs reproduce identical
    reports bit for bit, regardless of the thread count.
    """

    sigma: float
    gamma: float
    dt: float
    n_paths: int
    seed: int

    def __post_init__(self):
        if not (self.sigma > 0.0 and self.gamma > 0.0 and self.dt > 0.0):
            raise InvalidParams("sigma, gamma and dt must all be positive")
        if self.n_paths < 1:
            raise InvalidParams(f"need at least one path, got {self.n_paths}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParams("seed must fit in an unsigned 64-bit integer")

    @property
    def step(self) -> float:
        return self.sigma * math.sqrt(self.dt)

    @property
    def kappa(self) -> float:
        return self.gamma / self.sigma**2


@dataclass(frozen=True)
class WalkReport:
    """Monte Carlo two-barrier summary with per-path standard errors."""

    hit_high_fraction: float
    mean_cost: float
    stderr_hit: float
    stderr_cost: float


def _lattice_barriers(z: float, start: float, u_low: float, u_high: float) -> Tuple[int, int]:
    """Integer step counts at which the walk is absorbed (touch counts).

    The walk lives on the exact lattice start + z*S, so absorption happens at
    the first integer S with start + z*S outside (u_low, u_high).  The 1e-9
    nudge keeps barriers that sit exactly on a lattice point absorbing at the
    touch despite the single float division.
    """
    k_up = math.ceil((u_high - start) / z - 1e-9)
    k_down = math.ceil((start - u_low) / z - 1e-9)
    return max(k_up, 1), max(k_down, 1)


def _run_block(args) -> Tuple[int, int, int, int]:
    config, block_index, size, k_up, k_down = args
    key = (int(config.seed) << 64) + block_index
    rng = np.random.Generator(np.random.Philox(key=key))
    s = np.zeros(size, dtype=np.int64)
    steps = np.zeros(size, dtype=np.int64)
    hits = 0
    step_sum = 0
    step_sq_sum = 0
    while s.size:
        moves = rng.integers(0, 2, size=(s.size, _CHUNK), dtype=np.int64)
        paths = s[:, None] + np.cumsum(2 * moves - 1, axis=1)
        hit_high = paths >= k_up
        crossed = hit_high | (paths <= -k_down)
        done = crossed.any(axis=1)
        if done.any():
            rows = np.nonzero(done)[0]
            first = np.argmax(crossed[rows], axis=1)
            finished = steps[rows] + first + 1
            hits += int(hit_high[rows, first].sum())
            step_sum += int(finished.sum())
            step_sq_sum += int((finished * finished).sum())
        keep = ~done
        s = paths[keep, -1]
        steps = steps[keep] + _CHUNK
    return size, hits, step_sum, step_sq_sum


def simulate_two_barrier(
    config: RandomWalkConfig, start: float, u_low: float, u_high: float
) -> WalkReport:
    """Simulate +/-z steps from `start` until a barrier is crossed.

    A step that jumps past a barrier is recorded as absorption at that
    barrier (bias of order z, covered by the report's standard errors and
    the dt-refinement check).  Returns the fraction absorbed at the top
    barrier and the mean accumulated cost gamma*dt*steps, with standard
    errors from the per-path variance.
    """
    if not (u_low < start < u_high):
        raise InvalidBarriers(
            f"need u_low < start < u_high, got {u_low}, {start}, {u_high}"
        )
    z = config.step
    if z > (u_high - u_low) / 10.0:
        raise InvalidParams(
            f"step {z} too coarse for barriers spanning {u_high - u_low}; decrease dt"
        )
    k_up, k_down = _lattice_barriers(z, start, u_low, u_high)
    blocks = []
    offset = 0
    index = 0
    while offset < config.n_paths:
        size = min(_BLOCK, config.n_paths - offset)
        blocks.append((config, index, size, k_up, k_down))
        offset += size
        index += 1
    partials = parallel_map(_run_block, blocks)
    n = sum(p[0] for p in partials)
    hits = sum(p[1] for p in partials)
    s1 = sum(p[2] for p in partials)
    s2 = sum(p[3] for p in partials)
    frac = hits / n
    cost_per_step = config.gamma * config.dt
    mean_steps = s1 / n
    mean_cost = cost_per_step * mean_steps
    if n > 1:
        var_hit = frac * (1.0 - frac) * n / (n - 1)
        var_steps = (s2 - n * mean_steps * mean_steps) / (n - 1)
        stderr_hit = math.sqrt(var_hit / n)
        stderr_cost = cost_per_step * math.sqrt(max(var_steps, 0.0) / n)
    else:
        stderr_hit = stderr_cost = float("nan")
    return WalkReport(frac, mean_cost, stderr_hit, stderr_cost)


def upper_hull(points: Sequence[Tuple[float, float]]) -> list:
    """Upper convex hull (monotone chain) of points sorted by first coordinate."""
    hull: list = []
    for x, y in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # middle point on or below the chord -> drop it
            if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) >= 0.0:
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


def concave_envelope(points: Sequence[Tuple[float, float]], at: float) -> float:
    """Least concave majorant of the piecewise-linear interpolant, at one point.

    Needs at least three points with strictly increasing first coordinates;
    raises OutOfRange when `at` lies outside their span.  The hull keeps the
    sampled points exactly (no smoothing), so the resolution limit is the
    chord error of the grid: O(max curvature * spacing^2).
    """
    if len(points) < 3:
        raise InvalidParams(f"need at least 3 points, got {len(points)}")
    us = [p[0] for p in points]
    for a, b in zip(us, us[1:]):
        if not b > a:
            raise InvalidParams("points must be sorted with strictly increasing u")
    if not us[0] <= at <= us[-1]:
        raise OutOfRange(f"query {at} outside sampled span [{us[0]}, {us[-1]}]")
    hull = upper_hull(points)
    xs = [p[0] for p in hull]
    i = int(np.searchsorted(xs, at, side="right"))
    if i >= len(hull):
        return float(hull[-1][1])
    (x1, y1), (x2, y2) = hull[i - 1], hull[i]
    return float(y1 + (at - x1) / (x2 - x1) * (y2 - y1))


@dataclass(frozen=True)
class MixedCheckReport:
    """Deviations of a hidden-price equilibrium from its defining conditions.

    max_indifference_dev: largest relative deviation of p*(1 - F(x-)) from
    the price floor across the price support (the atom counts as demand at
    the top price).  max_affine_dev: largest absolute gap between the
    consumer payoff, integrated in closed form against the uniform price
    law, and the affine value line.  mean_dev: |numerical mean of F - mu|.
    """

    max_indifference_dev: float
    max_affine_dev: float
    mean_dev: float


def check_mixed_equilibrium(
    eq: MixedEquilibrium, params: ModelParams, grid_n: int = 200
) -> MixedCheckReport:
    """Evaluate the three equilibrium conditions on grid_n-point grids."""
    if grid_n < 2:
        raise InvalidParams(f"need at least a 2-point grid, got {grid_n}")
    a = eq.outside_effective
    kappa = params.kappa
    mu = params.mu

    ps = np.linspace(eq.p_lower, eq.p_upper, grid_n)
    profits = ps * (1.0 - eq.value_cdf_left(ps + a))
    max_indifference = float(np.max(np.abs(profits - eq.p_lower)) / eq.p_lower)

    xs = np.linspace(eq.x_lower, eq.x_upper, grid_n)
    t = xs - a
    # integral of (x - p) against the uniform price density 2*kappa on [p_lower, t]
    purchase_part = 2.0 * kappa * (
        xs * (t - eq.p_lower) - 0.5 * (t * t - eq.p_lower * eq.p_lower)
    )
    payoff = (
        a * (1.0 - eq.price_cdf(t)) + purchase_part - kappa * (xs - mu) ** 2
    )
    line = eq.value_line.slope * xs + eq.value_line.intercept
    max_affine = float(np.max(np.abs(payoff - line)))

    # mean of F: Gauss-Legendre in log(x - a) for the continuous part (the
    # density lam/(x-a)^2 becomes the smooth lam*(1 + a*exp(-t))), plus the atom
    lam = eq.indifference_profit
    lo, hi = math.log(eq.p_lower), math.log(eq.p_upper)
    nodes, weights = np.polynomial.legendre.leggauss(min(max(grid_n, 64), 400))
    tt = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    integrand = lam * (1.0 + a * np.exp(-tt))
    mean = 0.5 * (hi - lo) * float(weights @ integrand) + eq.x_upper * eq.atom_mass
    mean_dev = abs(mean - mu)

    return MixedCheckReport(max_indifference, max_affine, mean_dev)
