"""Sharp bounds on probabilities of causation (PNS, PN, PS) from experimental
and observational data, expected bound improvement from conducting an
observational study, and the unit-selection benefit-function extension."""

from ._pcbounds import (  # noqa: F401
    BenefitBounds,
    BenefitImprovement,
    BenefitSpec,
    BoundInterval,
    BoundSide,
    BoundSource,
    ConsistencyReport,
    ConsistencyViolation,
    CountTable2x2,
    EmptyArmError,
    EmptyTableError,
    EnumeratedBounds,
    ExperimentalDistribution,
    FeasibleInterval,
    FeasibleQuantity,
    GainEqualityError,
    ImprovementReport,
    InconsistentDataError,
    InvalidDistributionError,
    McEstimate,
    ObservationalDistribution,
    PointIdentifiedError,
    ResponseTypeDistribution,
    ScmSample,
    UndefinedConditionalError,
    WSigma,
    benefit_bounds_combined,
    benefit_bounds_experimental,
    benefit_expected_improvement,
    check_consistency,
    estimate_experimental,
    estimate_observational,
    expected_lower_gain,
    expected_upper_drop,
    feasible_interval_d,
    feasible_interval_d_prime,
    improvement_report,
    lower_gain_cdf,
    lp_vertex_enumeration,
    mc_expected_gain,
    mc_improvement_samples,
    pn_bounds,
    pns_bounds_combined,
    pns_bounds_experimental,
    pns_point_identification,
    ps_bounds,
    quadrature_expected_gain,
    sample_scm,
    upper_drop_cdf,
    w_and_sigma,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
