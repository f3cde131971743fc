#pragma once

#include "pcbounds/types.hpp"

namespace pcbounds {

/// Payoffs for selecting a complier, always-taker, never-taker, and defier.
/// sigma is derived exactly from the four payoffs; comparisons of sigma
/// against zero are exact, never tolerance-based.
struct BenefitSpec {
    double beta = 0.0;   // complier
    double gamma = 0.0;  // always-taker
    double theta = 0.0;  // never-taker
    double delta = 0.0;  // defier

    double sigma() const { return beta - gamma - theta + delta; }
};

/// Bounds on the benefit function f(c), money scale, full precision.
struct BenefitBounds {
    double lb = 0.0;
    double ub = 0.0;
    double w = 0.0;
    BoundSource source = BoundSource::experimental_only;
};

struct BenefitImprovement {
    double e_lb_gain = 0.0;  // E(LB'-LB)
    double e_ub_drop = 0.0;  // E(UB-UB')
};

struct WSigma {
    double w = 0.0;
    double sigma = 0.0;
};

/// W = (gamma-delta) P(y_x) + delta P(y_x') + theta P(y'_x'),
/// sigma = beta - gamma - theta + delta.
WSigma w_and_sigma(const BenefitSpec& b, const ExperimentalDistribution& e);

/// Benefit bounds from experimental data alone: the experimental-only PNS
/// interval [L, U] mapped through W + sigma * (.), endpoints swapped when
/// sigma < 0. sigma = 0 collapses to the point W (Gain Equality).
BenefitBounds benefit_bounds_experimental(const BenefitSpec& b,
                                          const ExperimentalDistribution& e);

/// Same assembly using the combined PNS interval [L', U'].
/// Throws InconsistentData if the consistency check fails.
BenefitBounds benefit_bounds_combined(const BenefitSpec& b,
                                      const ExperimentalDistribution& e,
                                      const ObservationalDistribution& o,
                                      double tolerance = kInputTolerance);

/// Expected tightening of the benefit bounds from an observational study:
/// |sigma| times the PNS-level expectations, paired straight for sigma > 0
/// and crosswise for sigma < 0. Throws GainEquality when sigma = 0 (carrying
/// the point value W) and PointIdentified on degenerate experimental data.
BenefitImprovement benefit_expected_improvement(const BenefitSpec& b,
                                                const ExperimentalDistribution& e);

}  // namespace pcbounds
