"""Numerical solver and verification harness for search markets where
consumers flexibly acquire information about match values during visits.

Solves the consumer's optimal learning/stopping problem, posted-price and
hidden-price equilibria for a single firm and for monopolistic competition,
comparative statics, and welfare comparisons across the two price-timing
regimes, and cross-checks every closed form against independent brute-force
and Monte Carlo oracles.
"""

from .core import Action, LearningPolicy, ModelParams, Regime, validate
from .errors import (
    BracketFailure,
    FlexSearchError,
    InconsistentPolicy,
    InvalidBarriers,
    InvalidParams,
    NegativeOutside,
    NonPositiveCost,
    NonPositiveKappa,
    NoTrade,
    OutOfRange,
    SearchCostTooHigh,
    ValidationError,
    WrongRegime,
)
from .hidden import (
    ActiveSearchRegion,
    AffineValueLine,
    MixedEquilibrium,
    WelfareTrends,
    active_search_region,
    competition_hidden_solve,
    competition_price_equation,
    competition_welfare_slope_condition,
    hidden_welfare_trends,
    kappa_turning_point,
    monopoly_mixed_solve,
    monopoly_price_equation,
    monopoly_welfare_slope_condition,
    price_kappa_slope_condition,
    solve_competition_lower_price,
    solve_monopoly_lower_price,
)
from .learning import (
    PolicyCostReport,
    StoppingPayoff,
    continuation_value,
    optimal_policy,
    policy_cost,
)
from .observable import (
    ActivePattern,
    ConsumerSearchValue,
    KappaCasePartition,
    ObservableEquilibrium,
    ParamSigns,
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
)
from .oracles import (
    MixedCheckReport,
    RandomWalkConfig,
    WalkReport,
    check_mixed_equilibrium,
    concave_envelope,
    simulate_two_barrier,
    upper_hull,
)
from .welfare import (
    FigureKind,
    FigureRow,
    MarketOutcome,
    RegimeComparison,
    compare_competition,
    compare_monopoly,
    figure_data,
)

__version__ = "0.1.0"
