#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "pcbounds/types.hpp"
#include "pcbounds/unit_selection.hpp"

namespace pcbounds {

/// Input JSON did not match the analysis schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// One parsed analysis request. Distributions arrive either directly or as
/// count tables; counts are estimated during parsing, so consumers only see
/// distributions.
struct AnalysisInput {
    std::optional<std::string> stratum;
    std::optional<ExperimentalDistribution> experimental;
    std::optional<ObservationalDistribution> observational;
    std::optional<BenefitSpec> benefit;
};

/// Parse the analysis schema:
///   {"experimental_counts": {"treated": {"pos": int, "neg": int},
///                            "control": {"pos": int, "neg": int}}}
///   or {"experimental": {"p_y_x": num, "p_y_xp": num}},
///   analogous "observational_counts" ({"chose": .., "declined": ..}) /
///   "observational" ({"p_xy", "p_xpy", "p_xyp", "p_xpyp"}),
///   optional "stratum" label and "benefit" {"beta","gamma","theta","delta"}.
/// Supplying both the counts and the direct form of the same distribution is
/// an error. Throws SchemaError / InvalidDistribution / EmptyArm / EmptyTable.
AnalysisInput parse_analysis_input(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const ExperimentalDistribution& e);
nlohmann::ordered_json to_json(const ObservationalDistribution& o);
nlohmann::ordered_json to_json(const BoundInterval& b);
nlohmann::ordered_json to_json(const ConsistencyReport& r);

/// Round every float in the document to `decimals` places, in-place.
void round_numbers(nlohmann::ordered_json& j, int decimals);

/// Shortest round-trip decimal form (std::to_chars); fixed-precision when
/// `decimals` is set.
std::string format_double(double v, std::optional<int> decimals = std::nullopt);

}  // namespace pcbounds
