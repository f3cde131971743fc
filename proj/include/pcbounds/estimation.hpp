#pragma once

#include "pcbounds/types.hpp"

namespace pcbounds {

/// Frequentist causal effects from an experimental 2x2 table.
/// Throws EmptyArm if either arm total is zero.
ExperimentalDistribution estimate_experimental(const CountTable2x2& t);

/// Frequentist joint distribution from an observational 2x2 table.
/// Throws EmptyTable if the table total is zero.
ObservationalDistribution estimate_observational(const CountTable2x2& t);

/// Tian-Pearl consistency check between experimental and observational data:
///   P(x,y) <= P(y_x) <= 1 - P(x,y')   and   P(x',y) <= P(y_x') <= 1 - P(x',y').
/// Failure is reported, not thrown; the report lists every violated
/// inequality with both sides.
ConsistencyReport check_consistency(const ExperimentalDistribution& e,
                                    const ObservationalDistribution& o,
                                    double tolerance = kInputTolerance);

/// Bundle distributions for a stratum, validating consistency when
/// observational data is present. Throws InconsistentData on failure.
Stratum make_stratum(std::string label, const ExperimentalDistribution& e,
                     std::optional<ObservationalDistribution> o = std::nullopt,
                     double tolerance = kInputTolerance);

}  // namespace pcbounds
