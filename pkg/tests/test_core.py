import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flexsearch import (
    ModelParams,
    NegativeOutside,
    NonPositiveCost,
    NonPositiveKappa,
    SearchCostTooHigh,
    validate,
)


def test_validate_accepts_strict_interior():
    p = validate(1.0, 0.01, 1.0, 0.0)
    assert p == ModelParams(1.0, 0.01, 1.0, 0.0)


def test_validate_rejects_boundary_search_cost():
    # 0.3 >= 1/(4*1) = 0.25
    with pytest.raises(SearchCostTooHigh):
        validate(1.0, 0.3, 1.0)
    with pytest.raises(SearchCostTooHigh):
        validate(1.0, 0.25, 1.0)


def test_validate_allows_negative_mu():
    p = validate(-0.5, 0.01, 1.0)
    assert p.mu == -0.5


@pytest.mark.parametrize(
    "kwargs, exc",
    [
        (dict(mu=1, c=0.0, kappa=1), NonPositiveCost),
        (dict(mu=1, c=-0.1, kappa=1), NonPositiveCost),
        (dict(mu=1, c=0.01, kappa=0.0), NonPositiveKappa),
        (dict(mu=1, c=0.01, kappa=-2.0), NonPositiveKappa),
        (dict(mu=1, c=0.01, kappa=1, outside=-0.01), NegativeOutside),
    ],
)
def test_validate_names_the_violated_constraint(kwargs, exc):
    with pytest.raises(exc):
        validate(**kwargs)


def test_validate_idempotent():
    p = validate(0.3, 0.02, 2.0, 0.1)
    again = validate(p.mu, p.c, p.kappa, p.outside)
    assert again == p


@given(
    kappa=st.floats(0.01, 50.0),
    frac=st.floats(1e-6, 0.999),
    mu=st.floats(-10.0, 10.0),
)
def test_valid_params_satisfy_derived_bound(kappa, frac, mu):
    # c < 1/(4k) forces 2*sqrt(c*k) < 1
    c = frac * 1.0 / (4.0 * kappa)
    p = validate(mu, c, kappa)
    assert 2.0 * math.sqrt(p.c * p.kappa) < 1.0


def test_helper_quantities():
    p = validate(1.0, 0.01, 1.0)
    assert p.learning_halfwidth == 0.25
    assert p.search_price == pytest.approx(0.1)
