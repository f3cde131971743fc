#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pcbounds/types.hpp"

namespace pcbounds {

/// Which PNS bound's improvement is being estimated.
enum class BoundSide { lower, upper };

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

/// Monte-Carlo estimate of the expected bound improvement, by direct
/// simulation of the defining hypothesis: draw D uniformly on its feasible
/// interval (D = P(y) for the lower side, D' = P(x,y)+P(x',y') for the
/// upper side) and average L'-L or U-U' computed from the max/min
/// definitions. Deterministic for a given seed; independent of the
/// closed-form path. A degenerate one-point interval is simulated as-is
/// and yields mean 0 with zero variance.
McEstimate mc_expected_gain(const ExperimentalDistribution& e, BoundSide which,
                            std::uint64_t n, std::uint64_t seed);

/// The raw improvement samples behind mc_expected_gain, for empirical-CDF
/// comparisons. Same draws as mc_expected_gain for equal (n, seed).
std::vector<double> mc_improvement_samples(const ExperimentalDistribution& e,
                                           BoundSide which, std::uint64_t n,
                                           std::uint64_t seed);

/// Composite-midpoint integration of the improvement over the feasible
/// interval, divided by its length. Agrees with the closed form within
/// O(1/panels^2). panels must be >= 1.
double quadrature_expected_gain(const ExperimentalDistribution& e, BoundSide which,
                                std::uint32_t panels);

// ---------------------------------------------------------------------------
// Ground-truth SCM sampling
// ---------------------------------------------------------------------------

enum class ResponseType : int { complier = 0, always_taker = 1, never_taker = 2, defier = 3 };

/// A binary-treatment/binary-outcome population described by its response
/// types, with per-type treatment propensities P(X=x | type) acting as the
/// confounding mechanism. Every probability of causation is exact by
/// construction here, which is what makes this a usable oracle.
struct ResponseTypeDistribution {
    double p_complier = 0.0;
    double p_always = 0.0;
    double p_never = 0.0;
    double p_defier = 0.0;
    /// P(X=x | type), indexed by ResponseType.
    std::array<double, 4> treatment_propensity{0.5, 0.5, 0.5, 0.5};

    ResponseTypeDistribution() = default;
    ResponseTypeDistribution(double complier, double always, double never, double defier,
                             std::array<double, 4> propensity);

    double true_pns() const { return p_complier; }
    /// PN among the X=x, Y=y population; empty if that event has mass 0.
    std::optional<double> true_pn() const;
    /// PS among the X=x', Y=y' population; empty if that event has mass 0.
    std::optional<double> true_ps() const;

    /// Exact causal effects: P(y_x) = complier+always, P(y_x') = always+defier.
    ExperimentalDistribution experimental() const;
    /// Exact joint P(X,Y) induced by the propensities.
    ObservationalDistribution observational() const;
};

struct ScmSample {
    ResponseTypeDistribution scm;
    ExperimentalDistribution experimental;
    ObservationalDistribution observational;
};

/// Draw a random population: response-type probabilities from a flat
/// Dirichlet, propensities uniform on [0,1]. The emitted distributions are
/// exact (no finite-sample noise) and always pass check_consistency.
/// Deterministic for a given seed.
ScmSample sample_scm(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Enumeration oracle
// ---------------------------------------------------------------------------

struct EnumeratedBounds {
    BoundInterval pns;
    std::optional<BoundInterval> pn;  // empty if P(x,y) = 0
    std::optional<BoundInterval> ps;  // empty if P(x',y') = 0
};

/// Brute-force sharp bounds: scan the one free response-type mass (the
/// always-taker share) on a deterministic grid, decide feasibility of each
/// candidate against (e, o) by exact interval algebra on the confounded
/// allocation, and bisect the feasibility boundary. No LP solver involved.
/// Matches the closed-form bounds within grid_step.
/// Throws InconsistentData if the consistency check fails.
EnumeratedBounds lp_vertex_enumeration(const ExperimentalDistribution& e,
                                       const ObservationalDistribution& o,
                                       double grid_step = 1e-3);

}  // namespace pcbounds
