#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcbounds {

/// Absolute tolerance for validating and comparing user-supplied probabilities.
inline constexpr double kInputTolerance = 1e-9;

/// Absolute tolerance for internal floating-point identities (sums, interval order).
inline constexpr double kInternalTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A probability or distribution failed validation.
class InvalidDistribution : public Error {
public:
    using Error::Error;
};

/// An experimental count table has an arm with zero total.
class EmptyArm : public Error {
public:
    using Error::Error;
};

/// An observational count table has zero total.
class EmptyTable : public Error {
public:
    using Error::Error;
};

struct ConsistencyViolation {
    std::string constraint;  // e.g. "P(x,y) <= P(y_x)"
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Result of the experimental/observational consistency check.
struct ConsistencyReport {
    bool passed = false;
    double tolerance = kInputTolerance;
    std::vector<ConsistencyViolation> violations;
};

/// Experimental and observational data violate the consistency constraints.
class InconsistentData : public Error {
public:
    InconsistentData(const std::string& what, ConsistencyReport report)
        : Error(what), report_(std::move(report)) {}
    const ConsistencyReport& report() const { return report_; }

private:
    ConsistencyReport report_;
};

/// A conditional probability (PN or PS) is undefined because its
/// conditioning event has probability zero.
class UndefinedConditional : public Error {
public:
    using Error::Error;
};

/// The requested quantity is already point-identified from experimental
/// data alone; carries the identified PNS value (0 or 1).
class PointIdentified : public Error {
public:
    PointIdentified(const std::string& what, double value)
        : Error(what), value_(value) {}
    double value() const { return value_; }

private:
    double value_;
};

/// sigma = 0: the benefit function is a point value, not an interval.
class GainEquality : public Error {
public:
    GainEquality(const std::string& what, double point_value)
        : Error(what), point_value_(point_value) {}
    double point_value() const { return point_value_; }

private:
    double point_value_;
};

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

/// The pair of causal effects P(y_x), P(y_{x'}) for one stratum.
/// Complements P(y'_x), P(y'_{x'}) are derived, never stored.
class ExperimentalDistribution {
public:
    ExperimentalDistribution(double p_y_x, double p_y_xp);

    double p_y_x() const { return p_y_x_; }
    double p_y_xp() const { return p_y_xp_; }
    double p_yp_x() const { return 1.0 - p_y_x_; }
    double p_yp_xp() const { return 1.0 - p_y_xp_; }

private:
    double p_y_x_;
    double p_y_xp_;
};

/// The joint distribution P(X, Y) over two binary variables.
class ObservationalDistribution {
public:
    ObservationalDistribution(double p_xy, double p_xpy, double p_xyp, double p_xpyp);

    double p_xy() const { return p_xy_; }
    double p_xpy() const { return p_xpy_; }
    double p_xyp() const { return p_xyp_; }
    double p_xpyp() const { return p_xpyp_; }

    double p_y() const { return p_xy_ + p_xpy_; }
    double p_yp() const { return 1.0 - p_y(); }

private:
    double p_xy_;
    double p_xpy_;
    double p_xyp_;
    double p_xpyp_;
};

// ---------------------------------------------------------------------------
// Count tables
// ---------------------------------------------------------------------------

/// Raw 2x2 study counts. Arm 0 is X = x (treated / chose), arm 1 is
/// X = x' (control / declined). Zero cells are allowed; only fully empty
/// arms or tables are rejected at estimation time.
struct CountTable2x2 {
    enum class Kind { experimental, observational };

    Kind kind = Kind::experimental;
    std::uint64_t pos_x = 0;    // positive outcome, X = x
    std::uint64_t neg_x = 0;    // negative outcome, X = x
    std::uint64_t pos_xp = 0;   // positive outcome, X = x'
    std::uint64_t neg_xp = 0;   // negative outcome, X = x'

    static CountTable2x2 experimental(std::uint64_t treated_pos, std::uint64_t treated_neg,
                                      std::uint64_t control_pos, std::uint64_t control_neg) {
        return {Kind::experimental, treated_pos, treated_neg, control_pos, control_neg};
    }

    static CountTable2x2 observational(std::uint64_t chose_pos, std::uint64_t chose_neg,
                                       std::uint64_t declined_pos, std::uint64_t declined_neg) {
        return {Kind::observational, chose_pos, chose_neg, declined_pos, declined_neg};
    }

    std::uint64_t total() const { return pos_x + neg_x + pos_xp + neg_xp; }
};

// ---------------------------------------------------------------------------
// Intervals
// ---------------------------------------------------------------------------

enum class BoundSource { experimental_only, combined };

/// A lower/upper bound pair with provenance.
struct BoundInterval {
    double lower = 0.0;
    double upper = 1.0;
    BoundSource source = BoundSource::experimental_only;

    double width() const { return upper - lower; }
    bool contains(double v, double tol = kInputTolerance) const {
        return v >= lower - tol && v <= upper + tol;
    }
};

// ---------------------------------------------------------------------------
// Strata
// ---------------------------------------------------------------------------

/// Data for one population stratum c. The label is opaque; all bound and
/// improvement operations are already per-stratum, so conditioning on c
/// means nothing more than feeding this stratum's distributions.
struct Stratum {
    std::string label;
    ExperimentalDistribution experimental;
    std::optional<ObservationalDistribution> observational;
};

}  // namespace pcbounds
