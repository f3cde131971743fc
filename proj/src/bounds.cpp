#include "pcbounds/bounds.hpp"

#include <algorithm>
#include <sstream>

#include "pcbounds/estimation.hpp"

namespace pcbounds {

namespace {

// Clamps to [0,1] and repairs sub-1e-12 endpoint crossings; anything wider
// means the inputs were not actually consistent.
BoundInterval make_unit_interval(double lower, double upper, BoundSource source,
                                 const char* what) {
    lower = std::clamp(lower, 0.0, 1.0);
    upper = std::clamp(upper, 0.0, 1.0);
    if (upper < lower) {
        if (lower - upper > kInternalTolerance) {
            std::ostringstream msg;
            msg << what << ": lower bound " << lower << " exceeds upper bound " << upper;
            ConsistencyReport report;
            report.passed = false;
            report.violations.push_back({"lower <= upper", lower, upper});
            throw InconsistentData(msg.str(), std::move(report));
        }
        upper = lower;
    }
    return {lower, upper, source};
}

void require_consistent(const ExperimentalDistribution& e,
                        const ObservationalDistribution& o, double tolerance,
                        const char* what) {
    ConsistencyReport report = check_consistency(e, o, tolerance);
    if (!report.passed) {
        throw InconsistentData(std::string(what) + ": experimental and observational data "
                                                   "violate the consistency constraints",
                               std::move(report));
    }
}

}  // namespace

BoundInterval pns_bounds_experimental(const ExperimentalDistribution& e) {
    const double lower = std::max(0.0, e.p_y_x() - e.p_y_xp());
    const double upper = std::min(e.p_y_x(), e.p_yp_xp());
    return make_unit_interval(lower, upper, BoundSource::experimental_only,
                              "experimental PNS bounds");
}

BoundInterval pns_bounds_combined(const ExperimentalDistribution& e,
                                  const ObservationalDistribution& o,
                                  double tolerance) {
    require_consistent(e, o, tolerance, "combined PNS bounds");
    const double lower = std::max({0.0,
                                   e.p_y_x() - e.p_y_xp(),
                                   o.p_y() - e.p_y_xp(),
                                   e.p_y_x() - o.p_y()});
    const double upper = std::min({e.p_y_x(),
                                   e.p_yp_xp(),
                                   o.p_xy() + o.p_xpyp(),
                                   e.p_y_x() - e.p_y_xp() + o.p_xyp() + o.p_xpy()});
    return make_unit_interval(lower, upper, BoundSource::combined, "combined PNS bounds");
}

BoundInterval pn_bounds(const ExperimentalDistribution& e,
                        const ObservationalDistribution& o, double tolerance) {
    require_consistent(e, o, tolerance, "PN bounds");
    if (o.p_xy() <= 0.0) {
        throw UndefinedConditional("PN conditions on (x, y) but P(x,y) = 0");
    }
    const double lower = std::max(0.0, (o.p_y() - e.p_y_xp()) / o.p_xy());
    const double upper = std::min(1.0, (e.p_yp_xp() - o.p_xpyp()) / o.p_xy());
    return make_unit_interval(lower, upper, BoundSource::combined, "PN bounds");
}

BoundInterval ps_bounds(const ExperimentalDistribution& e,
                        const ObservationalDistribution& o, double tolerance) {
    require_consistent(e, o, tolerance, "PS bounds");
    if (o.p_xpyp() <= 0.0) {
        throw UndefinedConditional("PS conditions on (x', y') but P(x',y') = 0");
    }
    const double lower = std::max(0.0, (o.p_yp() - e.p_yp_x()) / o.p_xpyp());
    const double upper = std::min(1.0, (e.p_y_x() - o.p_xy()) / o.p_xpyp());
    return make_unit_interval(lower, upper, BoundSource::combined, "PS bounds");
}

std::optional<double> pns_point_identification(const ExperimentalDistribution& e) {
    const double p = e.p_y_x();
    const double q = e.p_y_xp();
    if (p + q <= kInputTolerance) return 0.0;
    if (p + (1.0 - q) <= kInputTolerance) return 0.0;
    if ((1.0 - p) + (1.0 - q) <= kInputTolerance) return 0.0;
    if ((1.0 - p) + q <= kInputTolerance) return 1.0;
    return std::nullopt;
}

}  // namespace pcbounds
