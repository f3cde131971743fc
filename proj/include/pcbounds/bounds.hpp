#pragma once

#include <optional>

#include "pcbounds/types.hpp"

namespace pcbounds {

/// Sharp PNS bounds from experimental data alone:
///   max{0, P(y_x) - P(y_x')}  <=  PNS  <=  min{P(y_x), P(y'_x')}.
BoundInterval pns_bounds_experimental(const ExperimentalDistribution& e);

/// Sharp PNS bounds from combined experimental and observational data.
/// Requires the consistency check to pass; throws InconsistentData otherwise.
BoundInterval pns_bounds_combined(const ExperimentalDistribution& e,
                                  const ObservationalDistribution& o,
                                  double tolerance = kInputTolerance);

/// Sharp PN bounds. PN conditions on (x, y); throws UndefinedConditional
/// if P(x,y) = 0, and InconsistentData if the consistency check fails.
BoundInterval pn_bounds(const ExperimentalDistribution& e,
                        const ObservationalDistribution& o,
                        double tolerance = kInputTolerance);

/// Sharp PS bounds. PS conditions on (x', y'); throws UndefinedConditional
/// if P(x',y') = 0, and InconsistentData if the consistency check fails.
BoundInterval ps_bounds(const ExperimentalDistribution& e,
                        const ObservationalDistribution& o,
                        double tolerance = kInputTolerance);

/// PNS collapses to a point from experimental data alone in four corner
/// situations (tolerance 1e-9 on the sums):
///   P(y_x)+P(y_x') = 0, P(y_x)+P(y'_x') = 0, or P(y'_x)+P(y'_x') = 0  ->  0
///   P(y'_x)+P(y_x') = 0                                               ->  1
/// Returns empty elsewhere.
std::optional<double> pns_point_identification(const ExperimentalDistribution& e);

}  // namespace pcbounds
