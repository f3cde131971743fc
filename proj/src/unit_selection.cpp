#include "pcbounds/unit_selection.hpp"

#include "pcbounds/bounds.hpp"
#include "pcbounds/improvement.hpp"

namespace pcbounds {

namespace {

BenefitBounds assemble(const WSigma& ws, const BoundInterval& pns) {
    BenefitBounds out;
    out.w = ws.w;
    out.source = pns.source;
    if (ws.sigma > 0.0) {
        out.lb = ws.w + ws.sigma * pns.lower;
        out.ub = ws.w + ws.sigma * pns.upper;
    } else if (ws.sigma < 0.0) {
        out.lb = ws.w + ws.sigma * pns.upper;
        out.ub = ws.w + ws.sigma * pns.lower;
    } else {
        out.lb = out.ub = ws.w;  // Gain Equality
    }
    return out;
}

}  // namespace

WSigma w_and_sigma(const BenefitSpec& b, const ExperimentalDistribution& e) {
    const double w = (b.gamma - b.delta) * e.p_y_x() + b.delta * e.p_y_xp() +
                     b.theta * e.p_yp_xp();
    return {w, b.sigma()};
}

BenefitBounds benefit_bounds_experimental(const BenefitSpec& b,
                                          const ExperimentalDistribution& e) {
    return assemble(w_and_sigma(b, e), pns_bounds_experimental(e));
}

BenefitBounds benefit_bounds_combined(const BenefitSpec& b,
                                      const ExperimentalDistribution& e,
                                      const ObservationalDistribution& o,
                                      double tolerance) {
    return assemble(w_and_sigma(b, e), pns_bounds_combined(e, o, tolerance));
}

BenefitImprovement benefit_expected_improvement(const BenefitSpec& b,
                                                const ExperimentalDistribution& e) {
    const WSigma ws = w_and_sigma(b, e);
    if (ws.sigma == 0.0) {
        throw GainEquality("sigma = 0: the benefit function is the point value W", ws.w);
    }
    // Both expectation calls validate their own nondegeneracy sums and may
    // throw PointIdentified.
    if (ws.sigma > 0.0) {
        return {ws.sigma * expected_lower_gain(e), ws.sigma * expected_upper_drop(e)};
    }
    return {-ws.sigma * expected_upper_drop(e), -ws.sigma * expected_lower_gain(e)};
}

}  // namespace pcbounds
