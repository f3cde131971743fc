#include "pcbounds/improvement.hpp"

#include <algorithm>
#include <cmath>

#include "pcbounds/bounds.hpp"

namespace pcbounds {

namespace {

void require_nondegenerate(const ExperimentalDistribution& e, double sum_a, double sum_b,
                           const char* what) {
    if (sum_a > kInputTolerance && sum_b > kInputTolerance) return;
    // A vanishing sum puts e at a corner, so point identification always applies.
    const std::optional<double> point = pns_point_identification(e);
    throw PointIdentified(std::string(what) + ": PNS is point-identified, no observational "
                                              "study can move the bounds",
                          point.value_or(0.0));
}

double min_square_term(double p, double q) {
    const double m = std::min(std::min(p, 1.0 - p), std::min(q, 1.0 - q));
    return m * m;
}

// Piecewise-linear CDF shared by both improvement variables: for arguments
// (a, b) the ramp is (|a-b| + 2z) / denom on [0, z_max), where the case split
// on (a >= b, a+b >= 1) picks z_max and denom. Ties take the ">=" branch;
// adjacent cases agree there.
double improvement_cdf(double a, double b, double z) {
    const double base = std::abs(a - b);
    double z_max;
    double denom;
    if (a + b >= 1.0) {
        denom = (1.0 - a) + (1.0 - b);
        z_max = (a >= b) ? 1.0 - a : 1.0 - b;
    } else {
        denom = a + b;
        z_max = (a >= b) ? b : a;
    }
    if (z < 0.0) return 0.0;
    if (z >= z_max) return 1.0;
    return (base + 2.0 * z) / denom;
}

}  // namespace

FeasibleInterval feasible_interval_d(const ExperimentalDistribution& e) {
    return {std::max(0.0, e.p_y_x() - e.p_yp_xp()),
            std::min(1.0, e.p_y_x() + e.p_y_xp()),
            FeasibleQuantity::p_y};
}

FeasibleInterval feasible_interval_d_prime(const ExperimentalDistribution& e) {
    return {std::max(0.0, e.p_y_x() - e.p_y_xp()),
            std::min(1.0, e.p_y_x() + e.p_yp_xp()),
            FeasibleQuantity::p_xy_plus_xpyp};
}

double expected_lower_gain(const ExperimentalDistribution& e) {
    const double p = e.p_y_x();
    const double q = e.p_y_xp();
    const double sum = p + q;
    const double complement_sum = (1.0 - p) + (1.0 - q);
    require_nondegenerate(e, sum, complement_sum, "expected lower-bound gain");
    return min_square_term(p, q) / std::min(sum, complement_sum);
}

double expected_upper_drop(const ExperimentalDistribution& e) {
    const double p = e.p_y_x();
    const double q = e.p_y_xp();
    const double sum = p + (1.0 - q);
    const double complement_sum = (1.0 - p) + q;
    require_nondegenerate(e, sum, complement_sum, "expected upper-bound drop");
    return min_square_term(p, q) / std::min(sum, complement_sum);
}

double lower_gain_cdf(const ExperimentalDistribution& e, double z) {
    const double p = e.p_y_x();
    const double q = e.p_y_xp();
    require_nondegenerate(e, p + q, (1.0 - p) + (1.0 - q), "lower-gain CDF");
    return improvement_cdf(p, q, z);
}

double upper_drop_cdf(const ExperimentalDistribution& e, double z) {
    const double p = e.p_y_x();
    const double q = e.p_y_xp();
    require_nondegenerate(e, p + (1.0 - q), (1.0 - p) + q, "upper-drop CDF");
    return improvement_cdf(p, 1.0 - q, z);
}

ImprovementReport improvement_report(const ExperimentalDistribution& e) {
    return {expected_lower_gain(e), expected_upper_drop(e),
            feasible_interval_d(e), feasible_interval_d_prime(e)};
}

}  // namespace pcbounds
