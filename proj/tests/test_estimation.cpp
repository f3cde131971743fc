#include <doctest.h>

#include <cmath>
#include <random>

#include "pcbounds/estimation.hpp"
#include "pcbounds/oracle.hpp"

using namespace pcbounds;

TEST_CASE("experimental estimation from study counts") {
    const auto vaccine = estimate_experimental(CountTable2x2::experimental(795, 705, 720, 780));
    CHECK(vaccine.p_y_x() == doctest::Approx(0.53).epsilon(1e-12));
    CHECK(vaccine.p_y_xp() == doctest::Approx(0.48).epsilon(1e-12));

    const auto enticement =
        estimate_experimental(CountTable2x2::experimental(150, 1350, 1350, 150));
    CHECK(enticement.p_y_x() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(enticement.p_y_xp() == doctest::Approx(0.9).epsilon(1e-12));

    // zero cells are fine as long as each arm has observations
    const auto degenerate = estimate_experimental(CountTable2x2::experimental(0, 10, 10, 0));
    CHECK(degenerate.p_y_x() == 0.0);
    CHECK(degenerate.p_y_xp() == 1.0);

    CHECK_THROWS_AS(estimate_experimental(CountTable2x2::experimental(0, 0, 10, 10)),
                    EmptyArm);
    CHECK_THROWS_AS(estimate_experimental(CountTable2x2::experimental(10, 10, 0, 0)),
                    EmptyArm);
    CHECK_THROWS_AS(estimate_experimental(CountTable2x2::observational(1, 1, 1, 1)),
                    InvalidDistribution);
}

TEST_CASE("observational estimation from study counts") {
    const auto vaccine =
        estimate_observational(CountTable2x2::observational(210, 450, 90, 750));
    CHECK(vaccine.p_xy() == doctest::Approx(0.14).epsilon(1e-12));
    CHECK(vaccine.p_xpy() == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(vaccine.p_xyp() == doctest::Approx(0.30).epsilon(1e-12));
    CHECK(vaccine.p_xpyp() == doctest::Approx(0.50).epsilon(1e-12));
    CHECK(vaccine.p_y() == doctest::Approx(0.20).epsilon(1e-12));

    const auto discount =
        estimate_observational(CountTable2x2::observational(450, 345, 30, 675));
    CHECK(discount.p_xy() == doctest::Approx(0.30).epsilon(1e-12));
    CHECK(discount.p_xpy() == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(discount.p_xyp() == doctest::Approx(0.23).epsilon(1e-12));
    CHECK(discount.p_xpyp() == doctest::Approx(0.45).epsilon(1e-12));

    const auto single = estimate_observational(CountTable2x2::observational(1, 0, 0, 0));
    CHECK(single.p_xy() == 1.0);
    CHECK(single.p_xpyp() == 0.0);

    CHECK_THROWS_AS(estimate_observational(CountTable2x2::observational(0, 0, 0, 0)),
                    EmptyTable);
}

TEST_CASE("estimated joints sum to one and estimation is scale invariant") {
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<std::uint64_t> cell(0, 5000);
    const std::uint64_t factors[] = {2, 3, 7, 10};
    for (int trial = 0; trial < 500; ++trial) {
        std::uint64_t a = cell(rng), b = cell(rng), c = cell(rng), d = cell(rng);
        if (a + b + c + d == 0) a = 1;
        const auto base = estimate_observational(CountTable2x2::observational(a, b, c, d));
        const double sum = base.p_xy() + base.p_xpy() + base.p_xyp() + base.p_xpyp();
        CHECK(std::abs(sum - 1.0) <= 1e-12);

        const std::uint64_t k = factors[trial % 4];
        const auto scaled = estimate_observational(
            CountTable2x2::observational(a * k, b * k, c * k, d * k));
        CHECK(scaled.p_xy() == base.p_xy());
        CHECK(scaled.p_xpy() == base.p_xpy());
        CHECK(scaled.p_xyp() == base.p_xyp());
        CHECK(scaled.p_xpyp() == base.p_xpyp());

        if (a + b > 0 && c + d > 0) {
            const auto e1 = estimate_experimental(CountTable2x2::experimental(a, b, c, d));
            const auto e2 = estimate_experimental(
                CountTable2x2::experimental(a * k, b * k, c * k, d * k));
            CHECK(e1.p_y_x() == e2.p_y_x());
            CHECK(e1.p_y_xp() == e2.p_y_xp());
        }
    }
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(ExperimentalDistribution(1.2, 0.5), InvalidDistribution);
    CHECK_THROWS_AS(ExperimentalDistribution(0.5, -0.2), InvalidDistribution);
    CHECK_THROWS_AS(ExperimentalDistribution(std::nan(""), 0.5), InvalidDistribution);
    CHECK_THROWS_AS(ObservationalDistribution(0.5, 0.5, 0.5, 0.5), InvalidDistribution);
    CHECK_THROWS_AS(ObservationalDistribution(0.3, 0.3, 0.3, 0.2), InvalidDistribution);

    // values within the input tolerance are accepted and clamped
    const ExperimentalDistribution e(1.0 + 1e-10, -1e-10);
    CHECK(e.p_y_x() == 1.0);
    CHECK(e.p_y_xp() == 0.0);
}

TEST_CASE("consistency check on the vaccine data") {
    const ExperimentalDistribution e(0.53, 0.48);
    const ObservationalDistribution o(0.14, 0.06, 0.30, 0.50);
    const ConsistencyReport report = check_consistency(e, o);
    CHECK(report.passed);
    CHECK(report.violations.empty());
}

TEST_CASE("consistency check reports each violated inequality") {
    const ExperimentalDistribution e(0.53, 0.48);
    const ObservationalDistribution o(0.60, 0.06, 0.30, 0.04);
    const ConsistencyReport report = check_consistency(e, o);
    REQUIRE_FALSE(report.passed);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].constraint == "P(x,y) <= P(y_x)");
    CHECK(report.violations[0].lhs == doctest::Approx(0.60));
    CHECK(report.violations[0].rhs == doctest::Approx(0.53));
}

TEST_CASE("consistency boundary equalities pass") {
    const ExperimentalDistribution e(1.0, 0.0);
    const ObservationalDistribution o(0.5, 0.0, 0.0, 0.5);
    CHECK(check_consistency(e, o).passed);
}

TEST_CASE("consistency tolerance is adjustable") {
    const ExperimentalDistribution e(0.53, 0.48);
    // violates P(x,y) <= P(y_x) by 1e-6
    const ObservationalDistribution o(0.53 + 1e-6, 0.06 - 1e-6, 0.30, 0.50 - 0.39);
    CHECK_FALSE(check_consistency(e, o).passed);
    CHECK(check_consistency(e, o, 1e-3).passed);
}

TEST_CASE("every sampled SCM passes the consistency check") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const ScmSample sample = sample_scm(seed);
        const ConsistencyReport report =
            check_consistency(sample.experimental, sample.observational);
        CAPTURE(seed);
        CHECK(report.passed);
    }
}

TEST_CASE("stratum construction validates consistency") {
    const ExperimentalDistribution e(0.53, 0.48);
    const Stratum plain = make_stratum("all", e);
    CHECK(plain.label == "all");
    CHECK_FALSE(plain.observational.has_value());

    const ObservationalDistribution good(0.14, 0.06, 0.30, 0.50);
    const Stratum with_obs = make_stratum("all", e, good);
    CHECK(with_obs.observational.has_value());

    const ObservationalDistribution bad(0.60, 0.06, 0.30, 0.04);
    CHECK_THROWS_AS(make_stratum("all", e, bad), InconsistentData);
    try {
        make_stratum("all", e, bad);
    } catch (const InconsistentData& ex) {
        CHECK_FALSE(ex.report().passed);
        CHECK(ex.report().violations.size() == 1);
    }
}
