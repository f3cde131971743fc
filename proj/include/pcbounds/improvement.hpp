#pragma once

#include "pcbounds/types.hpp"

namespace pcbounds {

enum class FeasibleQuantity { p_y, p_xy_plus_xpyp };

/// The range an observational quantity can occupy given fixed experimental
/// data. Both endpoints lie in [0, 1] and lo <= hi always holds.
struct FeasibleInterval {
    double lo = 0.0;
    double hi = 1.0;
    FeasibleQuantity quantity = FeasibleQuantity::p_y;

    double length() const { return hi - lo; }
    bool contains(double v, double tol = kInputTolerance) const {
        return v >= lo - tol && v <= hi + tol;
    }
};

/// Feasible interval of D = P(y):
///   [max(0, P(y_x) - P(y'_x')), min(1, P(y_x) + P(y_x'))].
FeasibleInterval feasible_interval_d(const ExperimentalDistribution& e);

/// Feasible interval of D' = P(x,y) + P(x',y'):
///   [max(0, P(y_x) - P(y_x')), min(1, P(y_x) + P(y'_x'))].
FeasibleInterval feasible_interval_d_prime(const ExperimentalDistribution& e);

/// Expected increase of the PNS lower bound from adding observational data,
/// under D = P(y) uniform on its feasible interval:
///
///   E(L'-L) = min{P^2(y_x), P^2(y'_x), P^2(y_x'), P^2(y'_x')}
///           / min{P(y_x)+P(y_x'), P(y'_x)+P(y'_x')}.
///
/// Throws PointIdentified when a denominator sum vanishes (PNS is then a
/// point value and no study can improve it).
double expected_lower_gain(const ExperimentalDistribution& e);

/// Expected decrease of the PNS upper bound; same numerator as
/// expected_lower_gain over min{P(y_x)+P(y'_x'), P(y'_x)+P(y_x')}.
double expected_upper_drop(const ExperimentalDistribution& e);

/// CDF of the lower-bound improvement L'-L. Piecewise linear: 0 below 0, a
/// ramp (|P(y_x)-P(y_x')| + 2z) / denominator on [0, z_max), 1 from z_max on.
/// The case (and with it z_max and the denominator) is selected by the signs
/// of P(y_x)-P(y_x') and P(y_x)+P(y_x')-1; ties take the ">=" branch.
/// Total on all reals; throws PointIdentified on degenerate inputs.
double lower_gain_cdf(const ExperimentalDistribution& e, double z);

/// CDF of the upper-bound improvement U-U'. Same shape as lower_gain_cdf
/// with P(y_x') complemented throughout.
double upper_drop_cdf(const ExperimentalDistribution& e, double z);

/// Both expectations plus the feasible intervals they integrate over.
struct ImprovementReport {
    double e_lower_gain = 0.0;
    double e_upper_drop = 0.0;
    FeasibleInterval d_interval;
    FeasibleInterval d_prime_interval;
};

ImprovementReport improvement_report(const ExperimentalDistribution& e);

}  // namespace pcbounds
