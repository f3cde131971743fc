#include <doctest.h>

#include <json.hpp>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pcbounds/cli.hpp"
#include "test_util.hpp"

using nlohmann::ordered_json;
namespace cli = pcbounds::cli;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
    ordered_json json() const { return ordered_json::parse(out); }
    ordered_json error_json() const { return ordered_json::parse(err); }
};

CliResult run_cli(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    CliResult result;
    result.code = cli::run(args, in, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

const std::string kVaccineInput = R"({
  "experimental_counts": {"treated": {"pos": 795, "neg": 705},
                          "control": {"pos": 720, "neg": 780}},
  "observational_counts": {"chose": {"pos": 210, "neg": 450},
                           "declined": {"pos": 90, "neg": 750}}
})";

const std::string kDiscountInput = R"({
  "experimental_counts": {"treated": {"pos": 825, "neg": 675},
                          "control": {"pos": 600, "neg": 900}},
  "observational_counts": {"chose": {"pos": 450, "neg": 345},
                           "declined": {"pos": 30, "neg": 675}},
  "benefit": {"beta": 1500, "gamma": -800, "theta": 0, "delta": -2000}
})";

}  // namespace

TEST_CASE("bounds command on the vaccine tables") {
    const CliResult r = run_cli({"bounds"}, kVaccineInput);
    REQUIRE(r.code == 0);
    const ordered_json doc = r.json();
    CHECK_NEAR(doc["experimental"]["p_y_x"].get<double>(), 0.53, 1e-12);
    CHECK_NEAR(doc["pns_experimental"][0].get<double>(), 0.05, 1e-12);
    CHECK_NEAR(doc["pns_experimental"][1].get<double>(), 0.52, 1e-12);
    CHECK(doc["consistency"]["passed"].get<bool>());
    CHECK_NEAR(doc["pns_combined"][0].get<double>(), 0.33, 1e-12);
    CHECK_NEAR(doc["pns_combined"][1].get<double>(), 0.41, 1e-12);
    CHECK_NEAR(doc["pn"][1].get<double>(), 0.142857142857, 1e-9);
    CHECK_NEAR(doc["ps"][0].get<double>(), 0.66, 1e-12);
    CHECK_FALSE(doc.contains("pns_point"));
}

TEST_CASE("bounds command without observational data") {
    const CliResult r =
        run_cli({"bounds"}, R"({"experimental": {"p_y_x": 0.53, "p_y_xp": 0.48}})");
    REQUIRE(r.code == 0);
    const ordered_json doc = r.json();
    CHECK(doc.contains("pns_experimental"));
    CHECK_FALSE(doc.contains("pns_combined"));
    CHECK_FALSE(doc.contains("consistency"));
}

TEST_CASE("bounds command output is byte-identical across runs") {
    const CliResult a = run_cli({"bounds"}, kVaccineInput);
    const CliResult b = run_cli({"bounds"}, kVaccineInput);
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
}

TEST_CASE("bounds command reports undefined conditionals as null") {
    const CliResult r = run_cli(
        {"bounds"},
        R"({"experimental": {"p_y_x": 0.5, "p_y_xp": 0.5},
            "observational": {"p_xy": 0.0, "p_xpy": 0.5, "p_xyp": 0.2, "p_xpyp": 0.3}})");
    REQUIRE(r.code == 0);
    const ordered_json doc = r.json();
    CHECK(doc["pn"].is_null());
    CHECK(doc.contains("pn_undefined"));
    CHECK(doc["ps"].is_array());
}

TEST_CASE("bounds command exit codes") {
    CHECK(run_cli({"bounds"}, "this is not json").code == cli::exit_code::usage);
    CHECK(run_cli({"bounds"}, "{}").code == cli::exit_code::usage);
    CHECK(run_cli({"bounds"}, R"({"experimental": {"p_y_x": 7.0, "p_y_xp": 0.4}})").code ==
          cli::exit_code::usage);
    CHECK(run_cli({"nonsense-command"}).code == cli::exit_code::usage);

    const CliResult inconsistent = run_cli(
        {"bounds"},
        R"({"experimental": {"p_y_x": 0.53, "p_y_xp": 0.48},
            "observational": {"p_xy": 0.60, "p_xpy": 0.06, "p_xyp": 0.30, "p_xpyp": 0.04}})");
    CHECK(inconsistent.code == cli::exit_code::inconsistent);
    const ordered_json err = inconsistent.error_json();
    CHECK(err["error"] == "inconsistent_data");
    CHECK(err["violations"].size() == 1);
    CHECK(err["violations"][0]["constraint"] == "P(x,y) <= P(y_x)");
}

TEST_CASE("tolerance flag relaxes the consistency check") {
    const std::string input =
        R"({"experimental": {"p_y_x": 0.53, "p_y_xp": 0.48},
            "observational": {"p_xy": 0.530001, "p_xpy": 0.059999, "p_xyp": 0.30, "p_xpyp": 0.11}})";
    CHECK(run_cli({"bounds"}, input).code == cli::exit_code::inconsistent);
    CHECK(run_cli({"bounds", "--tolerance", "1e-3"}, input).code == 0);
}

TEST_CASE("improve command on the vaccine data") {
    const CliResult r =
        run_cli({"improve"}, R"({"experimental": {"p_y_x": 0.53, "p_y_xp": 0.48}})");
    REQUIRE(r.code == 0);
    const ordered_json doc = r.json();
    CHECK_NEAR(doc["e_lower_gain"].get<double>(), 0.2231, 5e-5);
    CHECK_NEAR(doc["e_upper_drop"].get<double>(), 0.2325, 5e-5);
    CHECK_NEAR(doc["d_interval"][0].get<double>(), 0.01, 1e-12);
    CHECK_NEAR(doc["d_prime_interval"][0].get<double>(), 0.05, 1e-12);
    CHECK(doc["advisory"] == "non-minor expected improvement");

    const CliResult high_bar = run_cli(
        {"improve", "--advisory-threshold", "0.24"},
        R"({"experimental": {"p_y_x": 0.53, "p_y_xp": 0.48}})");
    CHECK(high_bar.json()["advisory"] == "minor expected improvement");
}

TEST_CASE("improve command on the enticement data") {
    const CliResult r = run_cli(
        {"improve"},
        R"({"experimental_counts": {"treated": {"pos": 150, "neg": 1350},
                                    "control": {"pos": 1350, "neg": 150}}})");
    REQUIRE(r.code == 0);
    const ordered_json doc = r.json();
    CHECK_NEAR(doc["e_lower_gain"].get<double>(), 0.01, 1e-9);
    CHECK(doc["advisory"] == "minor expected improvement");
}

TEST_CASE("improve command refuses point-identified inputs") {
    const CliResult r =
        run_cli({"improve"}, R"({"experimental": {"p_y_x": 1.0, "p_y_xp": 0.0}})");
    CHECK(r.code == cli::exit_code::point_identified);
    const ordered_json err = r.error_json();
    CHECK(err["error"] == "point_identified");
    CHECK(err["point_identified"].get<double>() == 1.0);
}

TEST_CASE("unit-select command on the discount example") {
    const CliResult r = run_cli({"unit-select"}, kDiscountInput);
    REQUIRE(r.code == 0);
    const ordered_json doc = r.json();
    CHECK_NEAR(doc["w"].get<double>(), -140.0, 1e-9);
    CHECK_NEAR(doc["sigma"].get<double>(), 300.0, 1e-12);
    CHECK_NEAR(doc["bounds_experimental"][0].get<double>(), -95.0, 1e-9);
    CHECK_NEAR(doc["bounds_experimental"][1].get<double>(), 25.0, 1e-9);
    CHECK_NEAR(doc["e_lb_gain"].get<double>(), 50.53, 0.01);
    CHECK_NEAR(doc["e_ub_drop"].get<double>(), 56.47, 0.01);
    CHECK_NEAR(doc["bounds_combined"][0].get<double>(), -71.0, 1e-9);
    CHECK_NEAR(doc["bounds_combined"][1].get<double>(), -20.0, 1e-9);
}

TEST_CASE("unit-select command error paths") {
    const CliResult equality = run_cli(
        {"unit-select"},
        R"({"experimental": {"p_y_x": 0.53, "p_y_xp": 0.48},
            "benefit": {"beta": 1, "gamma": 1, "theta": 1, "delta": 1}})");
    CHECK(equality.code == cli::exit_code::gain_equality);
    CHECK(equality.error_json()["gain_equality_value"].get<double>() == 1.0);

    const CliResult no_benefit =
        run_cli({"unit-select"}, R"({"experimental": {"p_y_x": 0.5, "p_y_xp": 0.5}})");
    CHECK(no_benefit.code == cli::exit_code::usage);

    const CliResult degenerate = run_cli(
        {"unit-select"},
        R"({"experimental": {"p_y_x": 0.0, "p_y_xp": 0.0},
            "benefit": {"beta": 1500, "gamma": -800, "theta": 0, "delta": -2000}})");
    CHECK(degenerate.code == cli::exit_code::point_identified);
}

TEST_CASE("sweep produces a deterministic row-major grid") {
    const CliResult r = run_cli({"sweep", "--resolution", "2"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "p_y_x,p_y_xp,e_lower_gain,e_upper_drop");
    CHECK(rows[1].substr(0, 38) == "0.3333333333333333,0.3333333333333333");

    const CliResult again = run_cli({"sweep", "--resolution", "2"});
    CHECK(again.out == r.out);
}

TEST_CASE("sweep peaks at the center cell") {
    const CliResult r = run_cli({"sweep", "--resolution", "9"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);  // header
    double best = -1.0;
    std::string best_row;
    while (std::getline(lines, line)) {
        const auto last_comma = line.rfind(',');
        const auto prev_comma = line.rfind(',', last_comma - 1);
        const double gain = std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1));
        if (gain > best) {
            best = gain;
            best_row = line;
        }
    }
    CHECK(best_row == "0.5,0.5,0.25,0.25");
}

TEST_CASE("closed sweep leaves degenerate cells empty") {
    const CliResult r = run_cli({"sweep", "--resolution", "3", "--closed"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "0,0,,0");   // lower gain undefined at (0,0)
    CHECK(rows[2] == "0,1,0,");   // upper drop undefined at (0,1)
    CHECK(rows[6] == "1,0,0,");
    CHECK(rows[8] == "1,1,,0");
}

TEST_CASE("sweep respects --which and --round") {
    const CliResult r = run_cli({"sweep", "--resolution", "2", "--which", "lower",
                                 "--round", "4"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line == "0.3333,0.3333,0.1667,");
}

TEST_CASE("sweep flag validation and unwritable output") {
    CHECK(run_cli({"sweep", "--resolution", "1"}).code == cli::exit_code::usage);
    CHECK(run_cli({"sweep", "--which", "sideways"}).code == cli::exit_code::usage);
    const CliResult r =
        run_cli({"sweep", "--resolution", "2", "--output", "/nonexistent_dir/x.csv"});
    CHECK(r.code == cli::exit_code::output);
    CHECK(r.error_json()["error"] == "output");
}

TEST_CASE("oracle-check runs deterministically and validates flags") {
    const CliResult a =
        run_cli({"oracle-check", "--trials", "8", "--samples", "400000", "--seed", "11"});
    CHECK(a.code == 0);
    const ordered_json doc = a.json();
    CHECK(doc["passed"].get<bool>());
    CHECK(doc["containment_violations"].get<int>() == 0);

    const CliResult b =
        run_cli({"oracle-check", "--trials", "8", "--samples", "400000", "--seed", "11"});
    CHECK(b.out == a.out);

    CHECK(run_cli({"oracle-check", "--trials", "0"}).code == cli::exit_code::usage);
    CHECK(run_cli({"oracle-check", "--samples", "10"}).code == cli::exit_code::usage);
}

TEST_CASE("round flag trims output decimals") {
    const CliResult r = run_cli({"bounds", "--round", "2"}, kVaccineInput);
    REQUIRE(r.code == 0);
    const ordered_json doc = r.json();
    CHECK(doc["pns_combined"][0].get<double>() == 0.33);
    CHECK(doc["pns_combined"][1].get<double>() == 0.41);
}

TEST_CASE("help exits zero") {
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"bounds", "--help"}).code == 0);
}

TEST_CASE("fuzzed inputs never escape the documented exit codes") {
    std::mt19937_64 rng(0xFEEDFACE);
    const std::vector<std::string> commands[] = {
        {"bounds"}, {"improve"}, {"unit-select"}};
    const std::string key_pool[] = {
        "experimental",  "experimental_counts", "observational", "observational_counts",
        "benefit",       "stratum",             "p_y_x",         "p_y_xp",
        "p_xy",          "p_xpy",               "p_xyp",         "p_xpyp",
        "treated",       "control",             "chose",         "declined",
        "pos",           "neg",                 "beta",          "gamma",
        "theta",         "delta",               "junk",          "",
    };

    const auto random_scalar = [&]() -> std::string {
        switch (rng() % 6) {
            case 0: return std::to_string(static_cast<std::int64_t>(rng()) % 3000);
            case 1: return std::to_string(test_util::uniform(rng, -2.0, 2.0));
            case 2: return "\"text\"";
            case 3: return "null";
            case 4: return "1e308";
            default: return "[1, 2]";
        }
    };
    const std::function<std::string(int)> random_json = [&](int depth) -> std::string {
        if (depth <= 0 || rng() % 3 == 0) return random_scalar();
        std::string obj = "{";
        const int fields = static_cast<int>(rng() % 4);
        for (int f = 0; f < fields; ++f) {
            if (f) obj += ",";
            obj += "\"" + key_pool[rng() % std::size(key_pool)] + "\":" +
                   random_json(depth - 1);
        }
        return obj + "}";
    };

    int nonzero = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string input;
        switch (i % 3) {
            case 0: {  // random bytes
                const std::size_t len = rng() % 120;
                for (std::size_t k = 0; k < len; ++k) {
                    input.push_back(static_cast<char>(rng() % 256));
                }
                break;
            }
            case 1:  // structurally valid JSON with arbitrary content
                input = random_json(3);
                break;
            default: {  // truncated/mutated valid input
                input = kDiscountInput.substr(0, rng() % kDiscountInput.size());
                if (!input.empty()) input[rng() % input.size()] ^= 0x20;
                break;
            }
        }
        const CliResult r = run_cli(commands[i % 3], input);
        CAPTURE(i);
        const bool known_code = r.code == 0 || r.code == 2 || r.code == 3 ||
                                r.code == 4 || r.code == 5;
        CHECK(known_code);
        if (r.code != 0) {
            ++nonzero;
            REQUIRE_FALSE(r.err.empty());
            const ordered_json err = ordered_json::parse(r.err, nullptr, false);
            CHECK_FALSE(err.is_discarded());
        }
    }
    CHECK(nonzero > 5000);  // the corpus is overwhelmingly malformed
}
