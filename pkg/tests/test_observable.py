import math

import numpy as np
import pytest

from flexsearch import (
    ActivePattern,
    InvalidParams,
    Regime,
    WrongRegime,
    comparative_static_signs,
    competition_solve,
    consumer_search_value,
    deviation_profit,
    equilibrium_foc_check,
    fixed_point_check,
    kappa_case_partition,
    monopoly_equilibrium,
    monopoly_solve,
    obfuscation_corner,
    validate,
)
from conftest import draw_params


# ---------------------------------------------------------------- protocol

def test_consumer_search_value_active_search():
    out = consumer_search_value(validate(1.0, 0.01, 1.0), 0.1)
    assert out.regime is Regime.SEARCH_AND_LEARN
    assert out.value == pytest.approx(1.06)


def test_consumer_search_value_thresholds_on_mu_minus_p():
    # thresholds at -1/(4k) and sqrt(c/k) - 1/(4k) = -0.15 for c=0.01, k=1
    p = validate(-0.1, 0.01, 1.0)
    out = consumer_search_value(p, 0.0)
    assert out.regime is Regime.SEARCH_AND_LEARN  # -0.1 >= -0.15
    assert out.value == pytest.approx(-0.1 + 0.01 + 0.25 - 0.1)
    mid = consumer_search_value(validate(-0.2, 0.01, 1.0), 0.0)
    assert mid.regime is Regime.LEARN_NO_SEARCH
    assert mid.value == pytest.approx(0.0625 - 0.1 + 0.04)
    none = consumer_search_value(validate(-0.5, 0.01, 1.0), 0.0)
    assert none.regime is Regime.NO_TRADE
    assert none.value == 0.0


def test_consumer_search_value_boundary_ties(rng):
    for _ in range(50):
        p = draw_params(rng)
        r = p.learning_halfwidth
        s = p.search_price
        at_search = validate(s - r, p.c, p.kappa)
        assert consumer_search_value(at_search, 0.0).regime is Regime.SEARCH_AND_LEARN
        at_trade = validate(-r, p.c, p.kappa)
        assert consumer_search_value(at_trade, 0.0).regime in (
            Regime.LEARN_NO_SEARCH, Regime.SEARCH_AND_LEARN
        )


def test_search_value_covers_visit_cost(rng):
    for _ in range(200):
        p = draw_params(rng)
        price = float(rng.uniform(-0.5, 1.0))
        out = consumer_search_value(p, price)
        if out.regime is Regime.SEARCH_AND_LEARN:
            assert out.value >= p.c - 1e-12


def test_fixed_point_identity():
    assert fixed_point_check(validate(1.0, 0.01, 1.0), 0.1) <= 1e-10
    assert fixed_point_check(validate(2.0, 0.04, 0.5), math.sqrt(0.08)) <= 1e-10
    with pytest.raises(WrongRegime):
        fixed_point_check(validate(-0.5, 0.01, 1.0), 0.0)


# ---------------------------------------------------------------- monopoly

def test_monopoly_high_prior_dissuades_learning():
    eq = monopoly_solve(validate(1.0, 0.01, 1.0))
    assert (eq.price, eq.profit, eq.consumer_welfare) == (0.75, 0.75, 0.25)
    assert eq.stop_probability == 1.0


def test_monopoly_interior_branch():
    eq = monopoly_solve(validate(0.5, 0.01, 1.0))
    assert eq.price == pytest.approx(0.375)
    assert eq.profit == pytest.approx(0.28125)
    assert eq.consumer_welfare == pytest.approx(0.140625)
    assert eq.consumer_welfare == pytest.approx(eq.profit / 2.0)


def test_monopoly_no_trade():
    eq = monopoly_solve(validate(-0.5, 0.01, 1.0))
    assert eq.regime is Regime.NO_TRADE
    assert (eq.price, eq.profit, eq.consumer_welfare) == (0.0, 0.0, 0.0)


def test_monopoly_outside_option_shifts_solution():
    eq = monopoly_equilibrium(1.0, 1.0, 0.5)
    # interior branch since 3/(4k) + a = 1.25 > mu: price 1/(8k) + (mu-a)/2
    assert eq.price == pytest.approx(0.125 + 0.25)
    assert eq.profit == pytest.approx((1 + 4 * 0.5) ** 2 / 32)
    assert eq.consumer_welfare == pytest.approx(eq.profit / 2 + 0.5)


def test_monopoly_branch_continuity_at_high_threshold():
    kappa = 2.0
    mu = 3.0 / (4.0 * kappa) + 0.2
    lo = monopoly_equilibrium(mu - 1e-12, kappa, 0.2)
    hi = monopoly_equilibrium(mu + 1e-12, kappa, 0.2)
    assert lo.profit == pytest.approx(hi.profit, abs=1e-9)
    assert lo.consumer_welfare == pytest.approx(hi.consumer_welfare, abs=1e-9)


# ------------------------------------------------------------- competition

def test_competition_active_search_point():
    eq = competition_solve(validate(1.0, 0.01, 1.0))
    assert eq.regime is Regime.SEARCH_AND_LEARN
    assert eq.price == pytest.approx(0.1)
    assert eq.profit == pytest.approx(0.02)
    assert eq.consumer_welfare == pytest.approx(1.06)
    assert eq.stop_probability == pytest.approx(0.2)
    assert eq.expected_duration == pytest.approx(5.0)
    assert eq.expected_duration == pytest.approx(1.0 / eq.stop_probability)


def test_competition_learn_no_search_point():
    eq = competition_solve(validate(-0.1, 0.01, 1.0))
    assert eq.regime is Regime.LEARN_NO_SEARCH
    assert eq.price == pytest.approx(0.075)
    assert eq.profit == pytest.approx(0.01125)
    assert eq.consumer_welfare == pytest.approx(0.005625)
    assert eq.expected_duration == 1.0


def test_competition_no_trade_point():
    eq = competition_solve(validate(-0.3, 0.01, 1.0))
    assert eq.regime is Regime.NO_TRADE


def test_competition_requires_zero_outside():
    with pytest.raises(InvalidParams):
        competition_solve(validate(1.0, 0.01, 1.0, outside=0.5))


def test_regime_monotone_in_mu(rng):
    order = {Regime.NO_TRADE: 0, Regime.LEARN_NO_SEARCH: 1, Regime.SEARCH_AND_LEARN: 2}
    for _ in range(20):
        base = draw_params(rng)
        regimes = [
            order[competition_solve(validate(mu, base.c, base.kappa)).regime]
            for mu in np.linspace(-2.0, 3.0, 241)
        ]
        assert all(a <= b for a, b in zip(regimes, regimes[1:]))


def test_pareto_improvement_in_mu(rng):
    for _ in range(10):
        base = draw_params(rng)
        welfare, profit = [], []
        for mu in np.linspace(-2.0, 3.0, 241):
            eq = competition_solve(validate(mu, base.c, base.kappa))
            welfare.append(eq.consumer_welfare)
            profit.append(eq.profit)
        assert all(a <= b + 1e-12 for a, b in zip(welfare, welfare[1:]))
        assert all(a <= b + 1e-12 for a, b in zip(profit, profit[1:]))


def test_duration_steps_up_at_search_threshold():
    p = validate(0.0, 0.01, 1.0)
    threshold = 2.0 * p.search_price - p.learning_halfwidth
    below = competition_solve(validate(threshold - 1e-9, p.c, p.kappa))
    at = competition_solve(validate(threshold, p.c, p.kappa))
    assert below.expected_duration == 1.0
    assert at.expected_duration == pytest.approx(1.0 / (2.0 * math.sqrt(p.c * p.kappa)))
    assert at.expected_duration > 1.0


def test_profit_pinned_at_twice_search_cost(rng):
    for _ in range(100):
        p = draw_params(rng, mu_range=(0.5, 3.0))
        eq = competition_solve(p)
        if eq.regime is Regime.SEARCH_AND_LEARN:
            assert eq.profit == 2.0 * p.c  # exact, independent of mu and kappa


# ---------------------------------------------------------------- deviation

def test_foc_check_nonpositive():
    assert equilibrium_foc_check(validate(1.0, 0.01, 1.0)) <= 0.0
    assert equilibrium_foc_check(validate(2.0, 0.0625, 1.0)) <= 0.0
    assert equilibrium_foc_check(validate(1.0, 0.04, 0.25)) <= 0.0
    with pytest.raises(WrongRegime):
        equilibrium_foc_check(validate(-0.1, 0.01, 1.0))


def test_deviation_profit_at_equilibrium_price():
    p = validate(1.0, 0.01, 1.0)
    assert deviation_profit(p, p.search_price) == pytest.approx(2.0 * p.c)
    # selling probability caps at one for giveaway prices
    assert deviation_profit(p, 0.0) == 0.0


# ---------------------------------------------------------- kappa partition

def test_kappa_partition_split_case():
    part = kappa_case_partition(1.0, 0.3)
    assert part.case_id is ActivePattern.SPLIT
    assert part.kappa_low == pytest.approx(0.10505, abs=1e-5)
    assert part.kappa_high == pytest.approx(0.59495, abs=1e-5)
    assert 0.0 < part.kappa_low < part.kappa_high < part.kappa_max


def test_kappa_partition_always_active():
    part = kappa_case_partition(1.0, 0.01)
    assert part.case_id is ActivePattern.ALWAYS
    assert part.active_intervals == ((0.0, 25.0),)
    for kappa in np.linspace(0.01, 24.99, 50):
        assert part.active(kappa)


def test_kappa_partition_negative_mu():
    part = kappa_case_partition(-1.0, 0.1)
    assert part.case_id is ActivePattern.LOW_ONLY_NEGATIVE_MU
    assert part.kappa_high is None
    assert part.kappa_low > 0.0


def test_kappa_partition_low_only_and_zero_mu():
    part = kappa_case_partition(0.5, 0.2)  # c >= mu/3
    assert part.case_id is ActivePattern.LOW_ONLY
    zero = kappa_case_partition(0.0, 0.1)
    assert zero.case_id is ActivePattern.LOW_ONLY
    assert zero.kappa_low == pytest.approx(1.0 / (64.0 * 0.1))


def test_kappa_partition_split_bounds_inside_domain(rng):
    for _ in range(40):
        mu = float(rng.uniform(0.1, 3.0))
        c = float(rng.uniform(mu / 4.0, mu / 3.0))
        if not (mu / 4.0 < c < mu / 3.0):
            continue
        part = kappa_case_partition(mu, c)
        assert part.case_id is ActivePattern.SPLIT
        assert 0.0 < part.kappa_low < part.kappa_high < 1.0 / (4.0 * c)
        mid = 0.5 * (part.kappa_low + part.kappa_high)
        assert not part.active(mid)
        assert part.active(0.5 * part.kappa_low)
        assert part.active(0.5 * (part.kappa_high + part.kappa_max))


def test_kappa_partition_intervals_match_direct_inequality(rng):
    for _ in range(40):
        mu = float(rng.uniform(-1.0, 2.0))
        c = float(rng.uniform(0.01, 0.5))
        part = kappa_case_partition(mu, c)
        for kappa in np.linspace(0.001, part.kappa_max * 0.999, 97):
            inside = any(lo < kappa <= hi or kappa == hi for lo, hi in part.active_intervals)
            # interval endpoints are closed where the partition says they are
            direct = part.active(kappa)
            if direct != inside:
                # only permissible at an interval endpoint within float slop
                slack = min(
                    min(abs(kappa - lo), abs(kappa - hi))
                    for lo, hi in part.active_intervals
                )
                assert slack < 1e-9
            else:
                assert direct == inside


# --------------------------------------------------------- analytic signs

def test_sign_tables_at_reference_points():
    p = validate(1.0, 0.01, 1.0)
    kappa_signs = comparative_static_signs(p, "kappa")
    assert (kappa_signs.price_sign, kappa_signs.profit_sign, kappa_signs.welfare_sign) == (-1, 0, -1)
    c_signs = comparative_static_signs(p, "c")
    assert (c_signs.price_sign, c_signs.profit_sign, c_signs.welfare_sign) == (1, 1, -1)
    mu_signs = comparative_static_signs(validate(-0.1, 0.01, 1.0), "mu")
    assert (mu_signs.price_sign, mu_signs.profit_sign, mu_signs.welfare_sign) == (1, 1, 1)


def test_kappa_welfare_sign_flips_at_pivot():
    p = validate(1.0, 0.01, 7.0)  # kappa above 1/(16c) = 6.25
    assert comparative_static_signs(p, "kappa").welfare_sign == 1


def _solver_outputs(mu, c, kappa):
    eq = competition_solve(validate(mu, c, kappa))
    return np.array([eq.price, eq.profit, eq.consumer_welfare])


def _regime_stable(mu, c, kappa, which, delta):
    def regime_at(x):
        raw = {"mu": mu, "c": c, "kappa": kappa}
        raw[which] = x
        try:
            return competition_solve(validate(raw["mu"], raw["c"], raw["kappa"])).regime
        except Exception:
            return None
    x0 = {"mu": mu, "c": c, "kappa": kappa}[which]
    d = delta * max(1.0, abs(x0))
    return regime_at(x0 - d) == regime_at(x0) == regime_at(x0 + d) is not None


def test_signs_match_finite_differences(rng):
    for which in ("mu", "c", "kappa"):
        checked = mismatches = 0
        while checked < 60:
            p = draw_params(rng)
            if not _regime_stable(p.mu, p.c, p.kappa, which, 1e-3):
                continue
            checked += 1
            signs = comparative_static_signs(p, which)
            x0 = getattr(p, which)
            h = 1e-6 * max(1.0, abs(x0))
            for idx, predicted in enumerate(
                [signs.price_sign, signs.profit_sign, signs.welfare_sign]
            ):
                raw_hi = {"mu": p.mu, "c": p.c, "kappa": p.kappa}
                raw_lo = dict(raw_hi)
                raw_hi[which] = x0 + h
                raw_lo[which] = x0 - h
                fd = (_solver_outputs(**raw_hi)[idx] - _solver_outputs(**raw_lo)[idx]) / (2 * h)
                observed = 0 if abs(fd) < 1e-6 else (1 if fd > 0 else -1)
                if observed != predicted:
                    mismatches += 1
        assert mismatches <= max(1, checked * 3 // 100)


# ------------------------------------------------------------- obfuscation

def test_obfuscation_corner_examples():
    assert obfuscation_corner(validate(1.0, 0.01, 1.0), (0.5, 5.0)).is_corner
    assert obfuscation_corner(validate(0.3, 0.01, 1.0), (1.0, 10.0)).is_corner


def test_obfuscation_degenerate_interval():
    out = obfuscation_corner(validate(1.0, 0.01, 1.0), (2.0, 2.0))
    assert out.kappa_star == 2.0
    assert out.is_corner


def test_obfuscation_rejects_bad_interval():
    with pytest.raises(InvalidParams):
        obfuscation_corner(validate(1.0, 0.01, 1.0), (0.0, 5.0))
    with pytest.raises(InvalidParams):
        obfuscation_corner(validate(1.0, 0.01, 1.0), (1.0, 30.0))  # 30 >= 1/(4c)


def test_obfuscation_corner_random_intervals(rng):
    for _ in range(25):
        p = draw_params(rng, mu_range=(0.1, 2.0))
        hi_cap = 1.0 / (4.0 * p.c)
        lo = float(rng.uniform(0.02, 0.5)) * hi_cap
        hi = float(rng.uniform(lo, hi_cap * 0.99))
        assert obfuscation_corner(p, (lo, hi)).is_corner
