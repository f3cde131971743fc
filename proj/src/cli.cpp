#include "pcbounds/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcbounds/bounds.hpp"
#include "pcbounds/estimation.hpp"
#include "pcbounds/improvement.hpp"
#include "pcbounds/json_io.hpp"
#include "pcbounds/oracle.hpp"
#include "pcbounds/unit_selection.hpp"

namespace pcbounds::cli {

namespace {

using nlohmann::ordered_json;

void emit_error(std::ostream& err, const std::string& code, const std::string& message,
                ordered_json extra = ordered_json::object()) {
    ordered_json doc{{"error", code}, {"message", message}};
    for (auto& [key, value] : extra.items()) doc[key] = std::move(value);
    err << doc.dump() << '\n';
}

/// Write `text` to --output PATH when given, else to stdout.
int write_text(const std::string& text, const std::string& output_path, std::ostream& out,
               std::ostream& err) {
    if (output_path.empty()) {
        out << text;
        return exit_code::ok;
    }
    std::ofstream file(output_path, std::ios::binary);
    if (!file) {
        emit_error(err, "output", "cannot open output path: " + output_path);
        return exit_code::output;
    }
    file << text;
    file.flush();
    if (file.fail()) {
        emit_error(err, "output", "failed writing output path: " + output_path);
        return exit_code::output;
    }
    return exit_code::ok;
}

int write_json(ordered_json doc, std::optional<int> round, const std::string& output_path,
               std::ostream& out, std::ostream& err) {
    if (round) round_numbers(doc, *round);
    return write_text(doc.dump(2) + "\n", output_path, out, err);
}

AnalysisInput read_input(const std::string& input_path, std::istream& in) {
    std::string text;
    if (input_path.empty() || input_path == "-") {
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    } else {
        std::ifstream file(input_path, std::ios::binary);
        if (!file) throw SchemaError("cannot open input path: " + input_path);
        std::ostringstream buffer;
        buffer << file.rdbuf();
        text = buffer.str();
    }
    return parse_analysis_input(ordered_json::parse(text));
}

const ExperimentalDistribution& require_experimental(const AnalysisInput& input) {
    if (!input.experimental) {
        throw SchemaError("experimental data required: give \"experimental\" or "
                          "\"experimental_counts\"");
    }
    return *input.experimental;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

struct IoOptions {
    std::string input_path;
    std::string output_path;
    std::optional<int> round;
};

int cmd_bounds(const IoOptions& io, double tolerance, std::istream& in, std::ostream& out,
               std::ostream& err) {
    const AnalysisInput input = read_input(io.input_path, in);
    const ExperimentalDistribution& e = require_experimental(input);

    ordered_json doc;
    if (input.stratum) doc["stratum"] = *input.stratum;
    doc["experimental"] = to_json(e);
    doc["pns_experimental"] = to_json(pns_bounds_experimental(e));
    if (const std::optional<double> point = pns_point_identification(e)) {
        doc["pns_point"] = *point;
    }

    if (input.observational) {
        const ObservationalDistribution& o = *input.observational;
        doc["observational"] = to_json(o);
        ConsistencyReport report = check_consistency(e, o, tolerance);
        doc["consistency"] = to_json(report);
        if (!report.passed) {
            throw InconsistentData(
                "experimental and observational data violate the consistency constraints",
                std::move(report));
        }
        doc["pns_combined"] = to_json(pns_bounds_combined(e, o, tolerance));
        try {
            doc["pn"] = to_json(pn_bounds(e, o, tolerance));
        } catch (const UndefinedConditional& ex) {
            doc["pn"] = nullptr;
            doc["pn_undefined"] = ex.what();
        }
        try {
            doc["ps"] = to_json(ps_bounds(e, o, tolerance));
        } catch (const UndefinedConditional& ex) {
            doc["ps"] = nullptr;
            doc["ps_undefined"] = ex.what();
        }
    }
    return write_json(std::move(doc), io.round, io.output_path, out, err);
}

int cmd_improve(const IoOptions& io, double advisory_threshold, std::istream& in,
                std::ostream& out, std::ostream& err) {
    const AnalysisInput input = read_input(io.input_path, in);
    const ExperimentalDistribution& e = require_experimental(input);
    const ImprovementReport report = improvement_report(e);

    ordered_json doc;
    if (input.stratum) doc["stratum"] = *input.stratum;
    doc["experimental"] = to_json(e);
    doc["e_lower_gain"] = report.e_lower_gain;
    doc["e_upper_drop"] = report.e_upper_drop;
    doc["d_interval"] = ordered_json::array({report.d_interval.lo, report.d_interval.hi});
    doc["d_prime_interval"] =
        ordered_json::array({report.d_prime_interval.lo, report.d_prime_interval.hi});
    const bool non_minor = report.e_lower_gain > advisory_threshold &&
                           report.e_upper_drop > advisory_threshold;
    doc["advisory"] =
        non_minor ? "non-minor expected improvement" : "minor expected improvement";
    doc["advisory_threshold"] = advisory_threshold;
    return write_json(std::move(doc), io.round, io.output_path, out, err);
}

int cmd_unit_select(const IoOptions& io, double tolerance, std::istream& in,
                    std::ostream& out, std::ostream& err) {
    const AnalysisInput input = read_input(io.input_path, in);
    const ExperimentalDistribution& e = require_experimental(input);
    if (!input.benefit) {
        throw SchemaError("unit-select requires a \"benefit\" payoff vector");
    }
    const BenefitSpec& b = *input.benefit;
    const WSigma ws = w_and_sigma(b, e);
    if (ws.sigma == 0.0) {
        throw GainEquality("sigma = 0 (Gain Equality): the benefit function equals W "
                           "regardless of observational data",
                           ws.w);
    }

    ordered_json doc;
    if (input.stratum) doc["stratum"] = *input.stratum;
    doc["benefit"] = ordered_json{{"beta", b.beta},
                                  {"gamma", b.gamma},
                                  {"theta", b.theta},
                                  {"delta", b.delta}};
    doc["experimental"] = to_json(e);
    doc["w"] = ws.w;
    doc["sigma"] = ws.sigma;
    const BenefitBounds exp_bounds = benefit_bounds_experimental(b, e);
    doc["bounds_experimental"] = ordered_json::array({exp_bounds.lb, exp_bounds.ub});
    const BenefitImprovement improvement = benefit_expected_improvement(b, e);
    doc["e_lb_gain"] = improvement.e_lb_gain;
    doc["e_ub_drop"] = improvement.e_ub_drop;

    if (input.observational) {
        const ObservationalDistribution& o = *input.observational;
        doc["observational"] = to_json(o);
        ConsistencyReport report = check_consistency(e, o, tolerance);
        doc["consistency"] = to_json(report);
        if (!report.passed) {
            throw InconsistentData(
                "experimental and observational data violate the consistency constraints",
                std::move(report));
        }
        const BenefitBounds combined = benefit_bounds_combined(b, e, o, tolerance);
        doc["bounds_combined"] = ordered_json::array({combined.lb, combined.ub});
    }
    return write_json(std::move(doc), io.round, io.output_path, out, err);
}

int cmd_sweep(int resolution, const std::string& which, bool closed,
              const IoOptions& io, std::ostream& out, std::ostream& err) {
    std::vector<double> points;
    points.reserve(static_cast<std::size_t>(resolution));
    if (closed) {
        for (int i = 0; i < resolution; ++i) {
            points.push_back(static_cast<double>(i) / static_cast<double>(resolution - 1));
        }
    } else {
        for (int i = 1; i <= resolution; ++i) {
            points.push_back(static_cast<double>(i) / static_cast<double>(resolution + 1));
        }
    }

    const bool want_lower = which != "upper";
    const bool want_upper = which != "lower";

    std::string csv = "p_y_x,p_y_xp,e_lower_gain,e_upper_drop\n";
    for (double p : points) {
        for (double q : points) {
            const ExperimentalDistribution e(p, q);
            csv += format_double(p, io.round);
            csv += ',';
            csv += format_double(q, io.round);
            csv += ',';
            if (want_lower) {
                try {
                    csv += format_double(expected_lower_gain(e), io.round);
                } catch (const PointIdentified&) {
                    // degenerate cell: leave the field empty
                }
            }
            csv += ',';
            if (want_upper) {
                try {
                    csv += format_double(expected_upper_drop(e), io.round);
                } catch (const PointIdentified&) {
                }
            }
            csv += '\n';
        }
    }
    return write_text(csv, io.output_path, out, err);
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

struct CdfCasePoint {
    BoundSide side;
    double p, q;
};

int cmd_oracle_check(std::uint64_t trials, std::uint64_t samples, std::uint64_t seed,
                     const IoOptions& io, std::ostream& out, std::ostream& err) {
    std::mt19937_64 master(seed);
    const auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(master() >> 11) * 0x1.0p-53);
    };

    // Closed form vs Monte Carlo vs quadrature on random nondegenerate points.
    std::uint64_t mc_exceedances = 0;
    double mc_max_sigma_dev = 0.0;
    double quad_max_dev = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ExperimentalDistribution e(uniform(0.02, 0.98), uniform(0.02, 0.98));
        for (const BoundSide side : {BoundSide::lower, BoundSide::upper}) {
            const double closed = (side == BoundSide::lower) ? expected_lower_gain(e)
                                                             : expected_upper_drop(e);
            const McEstimate mc = mc_expected_gain(e, side, samples, master());
            if (mc.std_error > 0.0) {
                const double sigmas = std::abs(mc.mean - closed) / mc.std_error;
                mc_max_sigma_dev = std::max(mc_max_sigma_dev, sigmas);
                if (sigmas > 4.0) ++mc_exceedances;
            }
            const double quad = quadrature_expected_gain(e, side, 10000);
            quad_max_dev = std::max(quad_max_dev, std::abs(quad - closed));
        }
    }
    const std::uint64_t mc_allowed = (trials + 99) / 100;  // the 4-sigma test may
                                                           // legitimately fail ~1% of runs

    // Empirical CDF vs the piecewise closed form, one point per appendix case.
    const CdfCasePoint cdf_points[] = {
        {BoundSide::lower, 0.70, 0.60}, {BoundSide::lower, 0.40, 0.30},
        {BoundSide::lower, 0.60, 0.70}, {BoundSide::lower, 0.30, 0.40},
        {BoundSide::upper, 0.70, 0.40}, {BoundSide::upper, 0.40, 0.70},
        {BoundSide::upper, 0.60, 0.30}, {BoundSide::upper, 0.30, 0.60},
    };
    // 0.005 is the tolerance at 10^6 draws; the Kolmogorov deviation of an
    // empirical CDF scales like 1/sqrt(n) below that.
    const double cdf_tolerance =
        std::max(0.005, 2.2 / std::sqrt(static_cast<double>(samples)));
    double cdf_max_dev = 0.0;
    for (const CdfCasePoint& pt : cdf_points) {
        const ExperimentalDistribution e(pt.p, pt.q);
        std::vector<double> draws = mc_improvement_samples(e, pt.side, samples, master());
        std::sort(draws.begin(), draws.end());
        const double z_hi = draws.back();
        for (int k = 0; k < 100; ++k) {
            const double z = z_hi * static_cast<double>(k) / 99.0;
            const auto it = std::upper_bound(draws.begin(), draws.end(), z);
            const double ecdf = static_cast<double>(it - draws.begin()) /
                                static_cast<double>(draws.size());
            const double cdf = (pt.side == BoundSide::lower) ? lower_gain_cdf(e, z)
                                                             : upper_drop_cdf(e, z);
            cdf_max_dev = std::max(cdf_max_dev, std::abs(ecdf - cdf));
        }
    }

    // Ground-truth containment and enumeration agreement on sampled SCMs.
    std::uint64_t containment_violations = 0;
    double lp_max_dev = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ScmSample sample = sample_scm(master());
        const ExperimentalDistribution& e = sample.experimental;
        const ObservationalDistribution& o = sample.observational;
        if (!check_consistency(e, o).passed) {
            ++containment_violations;
            continue;
        }
        const BoundInterval combined = pns_bounds_combined(e, o);
        if (!combined.contains(sample.scm.true_pns())) ++containment_violations;
        if (!feasible_interval_d(e).contains(o.p_y())) ++containment_violations;
        if (!feasible_interval_d_prime(e).contains(o.p_xy() + o.p_xpyp())) {
            ++containment_violations;
        }
        const EnumeratedBounds enumerated = lp_vertex_enumeration(e, o);
        lp_max_dev = std::max({lp_max_dev,
                               std::abs(enumerated.pns.lower - combined.lower),
                               std::abs(enumerated.pns.upper - combined.upper)});
    }

    const bool passed = mc_exceedances <= mc_allowed && quad_max_dev <= 1e-6 &&
                        cdf_max_dev <= cdf_tolerance && containment_violations == 0 &&
                        lp_max_dev <= 1e-3;

    ordered_json doc{{"trials", trials},
                     {"samples", samples},
                     {"seed", seed},
                     {"mc_exceedances", mc_exceedances},
                     {"mc_allowed_exceedances", mc_allowed},
                     {"mc_max_sigma_deviation", mc_max_sigma_dev},
                     {"quadrature_max_abs_deviation", quad_max_dev},
                     {"cdf_max_abs_deviation", cdf_max_dev},
                     {"cdf_tolerance", cdf_tolerance},
                     {"lp_max_abs_deviation", lp_max_dev},
                     {"containment_violations", containment_violations},
                     {"passed", passed}};
    const int write_rc = write_json(std::move(doc), io.round, io.output_path, out, err);
    if (write_rc != exit_code::ok) return write_rc;
    return passed ? exit_code::ok : exit_code::oracle_failure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Sharp bounds on probabilities of causation, and the expected payoff "
                 "of conducting an observational study"};
    app.require_subcommand(1);

    IoOptions io;
    int round_decimals = -1;
    double tolerance = kInputTolerance;
    double advisory_threshold = 0.05;
    int resolution = 99;
    std::string which = "both";
    bool closed = false;
    std::uint64_t trials = 100;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 7;

    const auto add_io = [&](CLI::App* cmd, bool with_input) {
        if (with_input) {
            cmd->add_option("--input", io.input_path,
                            "Input JSON path (default: stdin, \"-\" for stdin)");
        }
        cmd->add_option("--output", io.output_path, "Output path (default: stdout)");
        cmd->add_option("--round", round_decimals, "Round output numbers to N decimals");
    };

    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "PNS/PN/PS bounds from experimental and "
                                     "(optionally) observational data");
    add_io(bounds_cmd, true);
    bounds_cmd->add_option("--tolerance", tolerance, "Consistency-check tolerance");

    CLI::App* improve_cmd = app.add_subcommand(
        "improve", "Expected tightening of the PNS bounds from an observational study");
    add_io(improve_cmd, true);
    improve_cmd->add_option("--advisory-threshold", advisory_threshold,
                            "Both expectations must exceed this for a non-minor advisory");

    CLI::App* unit_cmd = app.add_subcommand(
        "unit-select", "Benefit-function bounds and their expected improvement");
    add_io(unit_cmd, true);
    unit_cmd->add_option("--tolerance", tolerance, "Consistency-check tolerance");

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "CSV grid of both expected improvements over (P(y_x), P(y_x'))");
    add_io(sweep_cmd, false);
    sweep_cmd->add_option("--resolution", resolution, "Points per axis (>= 2)");
    sweep_cmd->add_option("--which", which, "lower, upper, or both")
        ->check(CLI::IsMember({"lower", "upper", "both"}));
    sweep_cmd->add_flag("--closed", closed,
                        "Include the 0/1 endpoints (degenerate cells emit empty fields)");

    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle-check", "Cross-validate closed forms against Monte Carlo, quadrature, "
                        "and sampled ground-truth populations");
    add_io(oracle_cmd, false);
    oracle_cmd->add_option("--trials", trials, "Random points / SCM draws per suite");
    oracle_cmd->add_option("--samples", samples, "Monte Carlo draws per estimate");
    oracle_cmd->add_option("--seed", seed, "Master seed");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("pcbounds");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_code::ok;
        }
        emit_error(err, "usage", e.what());
        return exit_code::usage;
    }

    if (round_decimals >= 0) io.round = round_decimals;

    try {
        if (bounds_cmd->parsed()) return cmd_bounds(io, tolerance, in, out, err);
        if (improve_cmd->parsed()) return cmd_improve(io, advisory_threshold, in, out, err);
        if (unit_cmd->parsed()) return cmd_unit_select(io, tolerance, in, out, err);
        if (sweep_cmd->parsed()) {
            if (resolution < 2) {
                emit_error(err, "usage", "--resolution must be >= 2");
                return exit_code::usage;
            }
            return cmd_sweep(resolution, which, closed, io, out, err);
        }
        if (oracle_cmd->parsed()) {
            if (trials < 1) {
                emit_error(err, "usage", "--trials must be >= 1");
                return exit_code::usage;
            }
            if (samples < 1000) {
                emit_error(err, "usage", "--samples must be >= 1000");
                return exit_code::usage;
            }
            return cmd_oracle_check(trials, samples, seed, io, out, err);
        }
        emit_error(err, "usage", "no subcommand given");
        return exit_code::usage;
    } catch (const InconsistentData& e) {
        ordered_json extra;
        extra["violations"] = to_json(e.report())["violations"];
        emit_error(err, "inconsistent_data", e.what(), std::move(extra));
        return exit_code::inconsistent;
    } catch (const PointIdentified& e) {
        emit_error(err, "point_identified", e.what(),
                   ordered_json{{"point_identified", e.value()}});
        return exit_code::point_identified;
    } catch (const GainEquality& e) {
        emit_error(err, "gain_equality", e.what(),
                   ordered_json{{"gain_equality_value", e.point_value()}});
        return exit_code::gain_equality;
    } catch (const nlohmann::json::exception& e) {
        emit_error(err, "schema", e.what());
        return exit_code::usage;
    } catch (const std::exception& e) {
        // SchemaError, InvalidDistribution, EmptyArm, EmptyTable, and anything
        // unforeseen: all input-quality problems as far as the caller cares.
        emit_error(err, "schema", e.what());
        return exit_code::usage;
    }
}

}  // namespace pcbounds::cli
