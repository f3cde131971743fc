#include "pcbounds/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pcbounds/estimation.hpp"
#include "pcbounds/improvement.hpp"

namespace pcbounds {

namespace {

// 53-bit uniform in [0, 1), bit-exact across platforms for mt19937_64.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// The improvement L'-L or U-U' as a function of the observational quantity,
// written from the max/min definitions so the oracle path never touches the
// closed forms it validates.
struct ImprovementKernel {
    double lo = 0.0;
    double hi = 0.0;
    double p = 0.0;   // P(y_x)
    double q = 0.0;   // P(y_x')
    BoundSide side = BoundSide::lower;

    static ImprovementKernel make(const ExperimentalDistribution& e, BoundSide side) {
        ImprovementKernel k;
        k.p = e.p_y_x();
        k.q = e.p_y_xp();
        k.side = side;
        const FeasibleInterval iv = (side == BoundSide::lower)
                                        ? feasible_interval_d(e)
                                        : feasible_interval_d_prime(e);
        k.lo = iv.lo;
        k.hi = iv.hi;
        return k;
    }

    double operator()(double d) const {
        if (side == BoundSide::lower) {
            const double base = std::max(0.0, p - q);
            const double with_obs = std::max({base, d - q, p - d});
            return with_obs - base;
        }
        const double qc = 1.0 - q;
        const double base = std::min(p, qc);
        const double with_obs = std::min({base, d, p + qc - d});
        return base - with_obs;
    }
};

}  // namespace

McEstimate mc_expected_gain(const ExperimentalDistribution& e, BoundSide which,
                            std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidDistribution("mc_expected_gain needs n >= 1");
    const ImprovementKernel kernel = ImprovementKernel::make(e, which);
    const double length = kernel.hi - kernel.lo;

    std::mt19937_64 rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double d = kernel.lo + uniform01(rng) * length;
        const double g = kernel(d);
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / static_cast<double>(n);
    double std_error = 0.0;
    if (n > 1) {
        const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) /
                                             static_cast<double>(n - 1));
        std_error = std::sqrt(var / static_cast<double>(n));
    }
    return {mean, std_error, n};
}

std::vector<double> mc_improvement_samples(const ExperimentalDistribution& e,
                                           BoundSide which, std::uint64_t n,
                                           std::uint64_t seed) {
    const ImprovementKernel kernel = ImprovementKernel::make(e, which);
    const double length = kernel.hi - kernel.lo;

    std::mt19937_64 rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        out.push_back(kernel(kernel.lo + uniform01(rng) * length));
    }
    return out;
}

double quadrature_expected_gain(const ExperimentalDistribution& e, BoundSide which,
                                std::uint32_t panels) {
    if (panels == 0) throw InvalidDistribution("quadrature_expected_gain needs panels >= 1");
    const ImprovementKernel kernel = ImprovementKernel::make(e, which);
    const double length = kernel.hi - kernel.lo;
    if (length <= 0.0) return kernel(kernel.lo);

    const double h = length / static_cast<double>(panels);
    double sum = 0.0;
    for (std::uint32_t i = 0; i < panels; ++i) {
        sum += kernel(kernel.lo + (static_cast<double>(i) + 0.5) * h);
    }
    return sum / static_cast<double>(panels);
}

// ---------------------------------------------------------------------------
// SCM sampling
// ---------------------------------------------------------------------------

ResponseTypeDistribution::ResponseTypeDistribution(double complier, double always,
                                                   double never, double defier,
                                                   std::array<double, 4> propensity)
    : p_complier(complier),
      p_always(always),
      p_never(never),
      p_defier(defier),
      treatment_propensity(propensity) {
    const double sum = p_complier + p_always + p_never + p_defier;
    if (p_complier < 0.0 || p_always < 0.0 || p_never < 0.0 || p_defier < 0.0 ||
        std::abs(sum - 1.0) > kInternalTolerance) {
        std::ostringstream msg;
        msg << "response-type probabilities must be nonnegative and sum to 1, got sum " << sum;
        throw InvalidDistribution(msg.str());
    }
    for (double pi : treatment_propensity) {
        if (!(pi >= 0.0 && pi <= 1.0)) {
            throw InvalidDistribution("treatment propensity outside [0, 1]");
        }
    }
}

std::optional<double> ResponseTypeDistribution::true_pn() const {
    const double c_mass = p_complier * treatment_propensity[0];
    const double a_mass = p_always * treatment_propensity[1];
    const double denom = c_mass + a_mass;  // P(x, y)
    if (denom <= 0.0) return std::nullopt;
    return c_mass / denom;
}

std::optional<double> ResponseTypeDistribution::true_ps() const {
    const double c_mass = p_complier * (1.0 - treatment_propensity[0]);
    const double n_mass = p_never * (1.0 - treatment_propensity[2]);
    const double denom = c_mass + n_mass;  // P(x', y')
    if (denom <= 0.0) return std::nullopt;
    return c_mass / denom;
}

ExperimentalDistribution ResponseTypeDistribution::experimental() const {
    return {std::min(1.0, p_complier + p_always), std::min(1.0, p_always + p_defier)};
}

ObservationalDistribution ResponseTypeDistribution::observational() const {
    const auto& pi = treatment_propensity;
    const double p_xy = p_complier * pi[0] + p_always * pi[1];
    const double p_xyp = p_never * pi[2] + p_defier * pi[3];
    const double p_xpy = p_always * (1.0 - pi[1]) + p_defier * (1.0 - pi[3]);
    const double p_xpyp = p_complier * (1.0 - pi[0]) + p_never * (1.0 - pi[2]);
    return {p_xy, p_xpy, p_xyp, p_xpyp};
}

ScmSample sample_scm(std::uint64_t seed) {
    std::mt19937_64 rng(seed);

    // Flat Dirichlet over the four response types via normalized exponentials.
    std::array<double, 4> g;
    double total = 0.0;
    for (double& gi : g) {
        gi = -std::log1p(-uniform01(rng));
        total += gi;
    }
    for (double& gi : g) gi /= total;

    std::array<double, 4> propensity;
    for (double& pi : propensity) pi = uniform01(rng);

    ResponseTypeDistribution scm(g[0], g[1], g[2], g[3], propensity);
    return {scm, scm.experimental(), scm.observational()};
}

// ---------------------------------------------------------------------------
// Enumeration oracle
// ---------------------------------------------------------------------------

namespace {

// Candidate decomposition of a population consistent with (e, o). Fixing the
// always-taker mass qa pins the other three response-type masses through the
// causal effects. The only freedom left is how much of each type chose
// treatment; writing A for the always-taker mass that did (it lands in the
// P(x,y) cell), the cell equations force
//   C  = P(x,y) - A                       complier mass choosing x, in [0, qc]
//   Dd = S - A with S = P(y_x') - P(x',y) defier mass choosing x,   in [0, qd]
//   N  = P(x,y') - Dd                     never-taker mass choosing x, in [0, qn]
// and A itself lies in [0, qa]. Intersecting gives one interval per qa.
struct AllocationSlice {
    double qc = 0.0, qa = 0.0, qn = 0.0, qd = 0.0;
    double a_lo = 0.0, a_hi = -1.0;  // empty when a_lo > a_hi

    bool feasible(double eps) const { return a_lo <= a_hi + eps; }
};

struct EnumerationProblem {
    double p, q;                  // P(y_x), P(y_x')
    double pxy, pxpy, pxyp, pxpyp;
    double s;                     // P(y_x') - P(x',y)

    AllocationSlice slice(double qa) const {
        AllocationSlice out;
        out.qa = qa;
        out.qc = p - qa;
        out.qd = q - qa;
        out.qn = 1.0 - p - q + qa;
        out.a_lo = std::max({0.0, pxy - out.qc, s - out.qd, s - pxyp});
        out.a_hi = std::min({qa, pxy, s, s - pxyp + out.qn});
        return out;
    }
};

}  // namespace

EnumeratedBounds lp_vertex_enumeration(const ExperimentalDistribution& e,
                                       const ObservationalDistribution& o,
                                       double grid_step) {
    if (!(grid_step > 0.0)) {
        throw InvalidDistribution("lp_vertex_enumeration needs grid_step > 0");
    }
    {
        ConsistencyReport report = check_consistency(e, o);
        if (!report.passed) {
            throw InconsistentData("lp_vertex_enumeration: inconsistent inputs",
                                   std::move(report));
        }
    }

    constexpr double eps = 1e-9;
    EnumerationProblem prob{e.p_y_x(),  e.p_y_xp(), o.p_xy(),
                            o.p_xpy(),  o.p_xyp(),  o.p_xpyp(),
                            e.p_y_xp() - o.p_xpy()};

    const double qa_min = std::max(0.0, prob.p + prob.q - 1.0);
    const double qa_max = std::min(prob.p, prob.q);

    // Scan the always-taker mass; the feasible set is a single interval, so a
    // sign-change scan plus boundary bisection recovers its endpoints to ~1e-12.
    const double span = qa_max - qa_min;
    const std::size_t cells =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / grid_step)));
    std::vector<double> grid;
    grid.reserve(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        grid.push_back(qa_min + span * static_cast<double>(i) / static_cast<double>(cells));
    }

    std::ptrdiff_t first = -1, last = -1;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.size()); ++i) {
        if (prob.slice(grid[i]).feasible(eps)) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) {
        // Consistency held but no response-type decomposition matched; only
        // reachable through float noise at the very edge of the constraints.
        ConsistencyReport report;
        report.passed = false;
        report.violations.push_back({"nonempty response-type polytope", 1.0, 0.0});
        throw InconsistentData("lp_vertex_enumeration: no feasible decomposition",
                               std::move(report));
    }

    const auto bisect_edge = [&](double feasible_qa, double infeasible_qa) {
        for (int iter = 0; iter < 60; ++iter) {
            const double mid = 0.5 * (feasible_qa + infeasible_qa);
            if (prob.slice(mid).feasible(eps)) {
                feasible_qa = mid;
            } else {
                infeasible_qa = mid;
            }
        }
        return feasible_qa;
    };

    double qa_left = grid[first];
    if (first > 0) qa_left = bisect_edge(grid[first], grid[first - 1]);
    double qa_right = grid[last];
    if (last + 1 < static_cast<std::ptrdiff_t>(grid.size())) {
        qa_right = bisect_edge(grid[last], grid[last + 1]);
    }

    EnumeratedBounds out;
    double a_min = std::numeric_limits<double>::infinity();
    double a_max = -a_min;
    double ps_min = a_min, ps_max = a_max;

    const auto visit = [&](double qa) {
        const AllocationSlice sl = prob.slice(qa);
        if (!sl.feasible(eps)) return;
        const double a_lo = std::min(sl.a_lo, sl.a_hi);
        const double a_hi = std::max(sl.a_lo, sl.a_hi);
        a_min = std::min(a_min, a_lo);
        a_max = std::max(a_max, a_hi);
        if (prob.pxpyp > 0.0) {
            ps_min = std::min(ps_min, (sl.qc - prob.pxy + a_lo) / prob.pxpyp);
            ps_max = std::max(ps_max, (sl.qc - prob.pxy + a_hi) / prob.pxpyp);
        }
    };

    visit(qa_left);
    visit(qa_right);
    for (std::ptrdiff_t i = first; i <= last; ++i) visit(grid[i]);

    out.pns = {std::clamp(prob.p - qa_right, 0.0, 1.0),
               std::clamp(prob.p - qa_left, 0.0, 1.0), BoundSource::combined};
    if (prob.pxy > 0.0) {
        out.pn = BoundInterval{std::clamp(1.0 - a_max / prob.pxy, 0.0, 1.0),
                               std::clamp(1.0 - a_min / prob.pxy, 0.0, 1.0),
                               BoundSource::combined};
    }
    if (prob.pxpyp > 0.0) {
        out.ps = BoundInterval{std::clamp(ps_min, 0.0, 1.0),
                               std::clamp(ps_max, 0.0, 1.0), BoundSource::combined};
    }
    return out;
}

}  // namespace pcbounds
