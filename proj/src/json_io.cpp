#include "pcbounds/json_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>

#include "pcbounds/estimation.hpp"

namespace pcbounds {

namespace {

using nlohmann::ordered_json;

const ordered_json& require_object(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + " must be a JSON object");
    return j;
}

const ordered_json& require_key(const ordered_json& j, const char* key,
                                const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where + " is missing key \"" + key + "\"");
    return *it;
}

double require_number(const ordered_json& j, const char* key, const std::string& where) {
    const ordered_json& v = require_key(j, key, where);
    if (!v.is_number()) throw SchemaError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::uint64_t require_count(const ordered_json& j, const char* key,
                            const std::string& where) {
    const ordered_json& v = require_key(j, key, where);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const std::int64_t n = v.get<std::int64_t>();
        if (n < 0) throw SchemaError(where + "." + key + " must be a nonnegative count");
        return static_cast<std::uint64_t>(n);
    }
    throw SchemaError(where + "." + key + " must be a nonnegative integer");
}

std::pair<std::uint64_t, std::uint64_t> parse_arm(const ordered_json& j, const char* key,
                                                  const std::string& where) {
    const ordered_json& arm = require_object(require_key(j, key, where), where + "." + key);
    return {require_count(arm, "pos", where + "." + key),
            require_count(arm, "neg", where + "." + key)};
}

ExperimentalDistribution parse_experimental(const ordered_json& root) {
    const bool has_counts = root.contains("experimental_counts");
    const bool has_direct = root.contains("experimental");
    if (has_counts && has_direct) {
        throw SchemaError("give either \"experimental_counts\" or \"experimental\", not both");
    }
    if (has_counts) {
        const ordered_json& t =
            require_object(root.at("experimental_counts"), "experimental_counts");
        const auto [tp, tn] = parse_arm(t, "treated", "experimental_counts");
        const auto [cp, cn] = parse_arm(t, "control", "experimental_counts");
        return estimate_experimental(CountTable2x2::experimental(tp, tn, cp, cn));
    }
    const ordered_json& e = require_object(root.at("experimental"), "experimental");
    return {require_number(e, "p_y_x", "experimental"),
            require_number(e, "p_y_xp", "experimental")};
}

ObservationalDistribution parse_observational(const ordered_json& root) {
    const bool has_counts = root.contains("observational_counts");
    const bool has_direct = root.contains("observational");
    if (has_counts && has_direct) {
        throw SchemaError(
            "give either \"observational_counts\" or \"observational\", not both");
    }
    if (has_counts) {
        const ordered_json& t =
            require_object(root.at("observational_counts"), "observational_counts");
        const auto [xp, xn] = parse_arm(t, "chose", "observational_counts");
        const auto [dp, dn] = parse_arm(t, "declined", "observational_counts");
        return estimate_observational(CountTable2x2::observational(xp, xn, dp, dn));
    }
    const ordered_json& o = require_object(root.at("observational"), "observational");
    return {require_number(o, "p_xy", "observational"),
            require_number(o, "p_xpy", "observational"),
            require_number(o, "p_xyp", "observational"),
            require_number(o, "p_xpyp", "observational")};
}

}  // namespace

AnalysisInput parse_analysis_input(const ordered_json& root) {
    require_object(root, "input");

    AnalysisInput input;
    if (root.contains("stratum")) {
        const ordered_json& s = root.at("stratum");
        if (!s.is_string()) throw SchemaError("stratum must be a string label");
        input.stratum = s.get<std::string>();
    }
    if (root.contains("experimental_counts") || root.contains("experimental")) {
        input.experimental = parse_experimental(root);
    }
    if (root.contains("observational_counts") || root.contains("observational")) {
        input.observational = parse_observational(root);
    }
    if (root.contains("benefit")) {
        const ordered_json& b = require_object(root.at("benefit"), "benefit");
        BenefitSpec spec{require_number(b, "beta", "benefit"),
                         require_number(b, "gamma", "benefit"),
                         require_number(b, "theta", "benefit"),
                         require_number(b, "delta", "benefit")};
        if (!std::isfinite(spec.beta) || !std::isfinite(spec.gamma) ||
            !std::isfinite(spec.theta) || !std::isfinite(spec.delta)) {
            throw SchemaError("benefit payoffs must be finite");
        }
        input.benefit = spec;
    }
    return input;
}

ordered_json to_json(const ExperimentalDistribution& e) {
    return ordered_json{{"p_y_x", e.p_y_x()}, {"p_y_xp", e.p_y_xp()}};
}

ordered_json to_json(const ObservationalDistribution& o) {
    return ordered_json{{"p_xy", o.p_xy()},
                        {"p_xpy", o.p_xpy()},
                        {"p_xyp", o.p_xyp()},
                        {"p_xpyp", o.p_xpyp()}};
}

ordered_json to_json(const BoundInterval& b) {
    return ordered_json::array({b.lower, b.upper});
}

ordered_json to_json(const ConsistencyReport& r) {
    ordered_json violations = ordered_json::array();
    for (const ConsistencyViolation& v : r.violations) {
        violations.push_back(
            ordered_json{{"constraint", v.constraint}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    }
    return ordered_json{
        {"passed", r.passed}, {"tolerance", r.tolerance}, {"violations", violations}};
}

void round_numbers(ordered_json& j, int decimals) {
    if (j.is_object() || j.is_array()) {
        for (ordered_json& child : j) round_numbers(child, decimals);
        return;
    }
    if (j.is_number_float()) {
        const double scale = std::pow(10.0, decimals);
        const double v = j.get<double>();
        if (std::isfinite(v) && std::abs(v) * scale < 1e15) {
            j = std::nearbyint(v * scale) / scale;
        }
    }
}

std::string format_double(double v, std::optional<int> decimals) {
    char buf[64];
    std::to_chars_result res =
        decimals ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed,
                                 *decimals)
                 : std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace pcbounds
