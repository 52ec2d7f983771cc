"""Shared helpers: independent oracles and random parameter generators.

The oracles here deliberately avoid the package's own numerics: root
anchors are reproduced with a plain fixed-iteration bisection, envelopes
with a brute-force chord scan, and derivatives with centered differences.
"""

import math

import numpy as np
import pytest

from flexsearch import validate


def oracle_bisect(f, lo, hi, iters=200):
    """Plain midpoint bisection, fixed iteration count, no early exit."""
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def envelope_brute(points, at):
    """Least concave majorant at `at` by scanning every chord (O(n^2))."""
    best = -math.inf
    for i, (xi, yi) in enumerate(points):
        if xi == at:
            best = max(best, yi)
        for xj, yj in points[i + 1:]:
            if xi <= at <= xj and xj > xi:
                t = (at - xi) / (xj - xi)
                best = max(best, yi + t * (yj - yi))
    return best


def centered(f, x, rel=1e-6):
    h = rel * max(1.0, abs(x))
    return (f(x + h) - f(x - h)) / (2.0 * h)


def draw_params(rng, mu_range=(-1.0, 3.0), kappa_range=(0.1, 5.0),
                c_range=(0.005, 0.2), outside=0.0):
    """One random valid parameter record (resamples until c < 1/(4k))."""
    while True:
        kappa = float(rng.uniform(*kappa_range))
        c = float(rng.uniform(*c_range))
        if c < 1.0 / (4.0 * kappa) * 0.98:
            break
    mu = float(rng.uniform(*mu_range))
    return validate(mu, c, kappa, outside)


def stopping_payoff_grid(mu, kappa, price, outside, n=4001):
    """(u, W(u)) samples on a window wide enough to pin the concavification."""
    center = outside + price
    r = 1.0 / (4.0 * kappa)
    lo = min(mu, center - r) - 1.0 / kappa
    hi = max(mu, center + r) + 1.0 / kappa
    us = np.linspace(lo, hi, n)
    penalty = kappa * (us - mu) ** 2
    ws = np.where(us - price <= outside, outside - penalty, us - price - penalty)
    return list(zip(us.tolist(), ws.tolist()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
