#include "pcbounds/estimation.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace pcbounds {

namespace {

double validated_probability(double p, const char* name) {
    if (!std::isfinite(p) || p < -kInputTolerance || p > 1.0 + kInputTolerance) {
        std::ostringstream msg;
        msg << name << " = " << p << " is not a probability in [0, 1]";
        throw InvalidDistribution(msg.str());
    }
    return std::min(1.0, std::max(0.0, p));
}

}  // namespace

ExperimentalDistribution::ExperimentalDistribution(double p_y_x, double p_y_xp)
    : p_y_x_(validated_probability(p_y_x, "P(y_x)")),
      p_y_xp_(validated_probability(p_y_xp, "P(y_x')")) {}

ObservationalDistribution::ObservationalDistribution(double p_xy, double p_xpy,
                                                     double p_xyp, double p_xpyp)
    : p_xy_(validated_probability(p_xy, "P(x,y)")),
      p_xpy_(validated_probability(p_xpy, "P(x',y)")),
      p_xyp_(validated_probability(p_xyp, "P(x,y')")),
      p_xpyp_(validated_probability(p_xpyp, "P(x',y')")) {
    const double sum = p_xy_ + p_xpy_ + p_xyp_ + p_xpyp_;
    if (std::abs(sum - 1.0) > kInputTolerance) {
        std::ostringstream msg;
        msg << "joint probabilities sum to " << sum << ", expected 1";
        throw InvalidDistribution(msg.str());
    }
}

ExperimentalDistribution estimate_experimental(const CountTable2x2& t) {
    if (t.kind != CountTable2x2::Kind::experimental) {
        throw InvalidDistribution("estimate_experimental needs an experimental table");
    }
    const std::uint64_t treated = t.pos_x + t.neg_x;
    const std::uint64_t control = t.pos_xp + t.neg_xp;
    if (treated == 0) throw EmptyArm("treated arm has zero total");
    if (control == 0) throw EmptyArm("control arm has zero total");
    return {static_cast<double>(t.pos_x) / static_cast<double>(treated),
            static_cast<double>(t.pos_xp) / static_cast<double>(control)};
}

ObservationalDistribution estimate_observational(const CountTable2x2& t) {
    if (t.kind != CountTable2x2::Kind::observational) {
        throw InvalidDistribution("estimate_observational needs an observational table");
    }
    const std::uint64_t total = t.total();
    if (total == 0) throw EmptyTable("observational table has zero total");
    const double n = static_cast<double>(total);
    return {static_cast<double>(t.pos_x) / n, static_cast<double>(t.pos_xp) / n,
            static_cast<double>(t.neg_x) / n, static_cast<double>(t.neg_xp) / n};
}

ConsistencyReport check_consistency(const ExperimentalDistribution& e,
                                    const ObservationalDistribution& o,
                                    double tolerance) {
    ConsistencyReport report;
    report.tolerance = tolerance;

    const auto require = [&](const char* constraint, double lhs, double rhs) {
        if (lhs > rhs + tolerance) {
            report.violations.push_back({constraint, lhs, rhs});
        }
    };

    require("P(x,y) <= P(y_x)", o.p_xy(), e.p_y_x());
    require("P(y_x) <= 1 - P(x,y')", e.p_y_x(), 1.0 - o.p_xyp());
    require("P(x',y) <= P(y_x')", o.p_xpy(), e.p_y_xp());
    require("P(y_x') <= 1 - P(x',y')", e.p_y_xp(), 1.0 - o.p_xpyp());

    report.passed = report.violations.empty();
    return report;
}

Stratum make_stratum(std::string label, const ExperimentalDistribution& e,
                     std::optional<ObservationalDistribution> o, double tolerance) {
    if (o) {
        ConsistencyReport report = check_consistency(e, *o, tolerance);
        if (!report.passed) {
            throw InconsistentData("stratum '" + label + "' fails the consistency check",
                                   std::move(report));
        }
    }
    return Stratum{std::move(label), e, std::move(o)};
}

}  // namespace pcbounds
