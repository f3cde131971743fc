#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pcbounds/bounds.hpp"
#include "pcbounds/estimation.hpp"
#include "pcbounds/improvement.hpp"
#include "pcbounds/oracle.hpp"
#include "pcbounds/unit_selection.hpp"

namespace py = pybind11;
using namespace pcbounds;

namespace {

std::string interval_repr(const char* name, double lo, double hi) {
    std::ostringstream os;
    os << name << "(" << lo << ", " << hi << ")";
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_pcbounds, m) {
    m.doc() = "Sharp bounds on probabilities of causation and the expected "
              "improvement from observational data";

    // Exceptions ------------------------------------------------------------
    py::register_exception<InvalidDistribution>(m, "InvalidDistributionError",
                                                PyExc_ValueError);
    py::register_exception<EmptyArm>(m, "EmptyArmError", PyExc_ValueError);
    py::register_exception<EmptyTable>(m, "EmptyTableError", PyExc_ValueError);
    py::register_exception<UndefinedConditional>(m, "UndefinedConditionalError",
                                                 PyExc_ValueError);
    static py::exception<InconsistentData> inconsistent(m, "InconsistentDataError");
    static py::exception<PointIdentified> point_identified(m, "PointIdentifiedError");
    static py::exception<GainEquality> gain_equality(m, "GainEqualityError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InconsistentData& e) {
            inconsistent(e.what());
        } catch (const PointIdentified& e) {
            point_identified(e.what());
        } catch (const GainEquality& e) {
            gain_equality(e.what());
        }
    });

    // Types -----------------------------------------------------------------
    py::class_<ExperimentalDistribution>(m, "ExperimentalDistribution")
        .def(py::init<double, double>(), py::arg("p_y_x"), py::arg("p_y_xp"))
        .def_property_readonly("p_y_x", &ExperimentalDistribution::p_y_x)
        .def_property_readonly("p_y_xp", &ExperimentalDistribution::p_y_xp)
        .def_property_readonly("p_yp_x", &ExperimentalDistribution::p_yp_x)
        .def_property_readonly("p_yp_xp", &ExperimentalDistribution::p_yp_xp)
        .def("__repr__", [](const ExperimentalDistribution& e) {
            return interval_repr("ExperimentalDistribution", e.p_y_x(), e.p_y_xp());
        });

    py::class_<ObservationalDistribution>(m, "ObservationalDistribution")
        .def(py::init<double, double, double, double>(), py::arg("p_xy"),
             py::arg("p_xpy"), py::arg("p_xyp"), py::arg("p_xpyp"))
        .def_property_readonly("p_xy", &ObservationalDistribution::p_xy)
        .def_property_readonly("p_xpy", &ObservationalDistribution::p_xpy)
        .def_property_readonly("p_xyp", &ObservationalDistribution::p_xyp)
        .def_property_readonly("p_xpyp", &ObservationalDistribution::p_xpyp)
        .def_property_readonly("p_y", &ObservationalDistribution::p_y)
        .def_property_readonly("p_yp", &ObservationalDistribution::p_yp);

    py::class_<CountTable2x2>(m, "CountTable2x2")
        .def_static("experimental", &CountTable2x2::experimental, py::arg("treated_pos"),
                    py::arg("treated_neg"), py::arg("control_pos"), py::arg("control_neg"))
        .def_static("observational", &CountTable2x2::observational, py::arg("chose_pos"),
                    py::arg("chose_neg"), py::arg("declined_pos"), py::arg("declined_neg"))
        .def("total", &CountTable2x2::total);

    py::enum_<BoundSource>(m, "BoundSource")
        .value("experimental_only", BoundSource::experimental_only)
        .value("combined", BoundSource::combined);

    py::class_<BoundInterval>(m, "BoundInterval")
        .def_readonly("lower", &BoundInterval::lower)
        .def_readonly("upper", &BoundInterval::upper)
        .def_readonly("source", &BoundInterval::source)
        .def("width", &BoundInterval::width)
        .def("contains", &BoundInterval::contains, py::arg("value"),
             py::arg("tol") = kInputTolerance)
        .def("__repr__", [](const BoundInterval& b) {
            return interval_repr("BoundInterval", b.lower, b.upper);
        });

    py::class_<ConsistencyViolation>(m, "ConsistencyViolation")
        .def_readonly("constraint", &ConsistencyViolation::constraint)
        .def_readonly("lhs", &ConsistencyViolation::lhs)
        .def_readonly("rhs", &ConsistencyViolation::rhs);

    py::class_<ConsistencyReport>(m, "ConsistencyReport")
        .def_readonly("passed", &ConsistencyReport::passed)
        .def_readonly("tolerance", &ConsistencyReport::tolerance)
        .def_readonly("violations", &ConsistencyReport::violations);

    py::enum_<FeasibleQuantity>(m, "FeasibleQuantity")
        .value("p_y", FeasibleQuantity::p_y)
        .value("p_xy_plus_xpyp", FeasibleQuantity::p_xy_plus_xpyp);

    py::class_<FeasibleInterval>(m, "FeasibleInterval")
        .def_readonly("lo", &FeasibleInterval::lo)
        .def_readonly("hi", &FeasibleInterval::hi)
        .def_readonly("quantity", &FeasibleInterval::quantity)
        .def("length", &FeasibleInterval::length)
        .def("contains", &FeasibleInterval::contains, py::arg("value"),
             py::arg("tol") = kInputTolerance)
        .def("__repr__", [](const FeasibleInterval& f) {
            return interval_repr("FeasibleInterval", f.lo, f.hi);
        });

    py::class_<ImprovementReport>(m, "ImprovementReport")
        .def_readonly("e_lower_gain", &ImprovementReport::e_lower_gain)
        .def_readonly("e_upper_drop", &ImprovementReport::e_upper_drop)
        .def_readonly("d_interval", &ImprovementReport::d_interval)
        .def_readonly("d_prime_interval", &ImprovementReport::d_prime_interval);

    py::class_<BenefitSpec>(m, "BenefitSpec")
        .def(py::init<double, double, double, double>(), py::arg("beta"), py::arg("gamma"),
             py::arg("theta"), py::arg("delta"))
        .def_readonly("beta", &BenefitSpec::beta)
        .def_readonly("gamma", &BenefitSpec::gamma)
        .def_readonly("theta", &BenefitSpec::theta)
        .def_readonly("delta", &BenefitSpec::delta)
        .def("sigma", &BenefitSpec::sigma);

    py::class_<BenefitBounds>(m, "BenefitBounds")
        .def_readonly("lb", &BenefitBounds::lb)
        .def_readonly("ub", &BenefitBounds::ub)
        .def_readonly("w", &BenefitBounds::w)
        .def_readonly("source", &BenefitBounds::source)
        .def("__repr__",
             [](const BenefitBounds& b) { return interval_repr("BenefitBounds", b.lb, b.ub); });

    py::class_<BenefitImprovement>(m, "BenefitImprovement")
        .def_readonly("e_lb_gain", &BenefitImprovement::e_lb_gain)
        .def_readonly("e_ub_drop", &BenefitImprovement::e_ub_drop);

    py::class_<WSigma>(m, "WSigma")
        .def_readonly("w", &WSigma::w)
        .def_readonly("sigma", &WSigma::sigma);

    py::enum_<BoundSide>(m, "BoundSide")
        .value("lower", BoundSide::lower)
        .value("upper", BoundSide::upper);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("n", &McEstimate::n);

    py::class_<ResponseTypeDistribution>(m, "ResponseTypeDistribution")
        .def(py::init<double, double, double, double, std::array<double, 4>>(),
             py::arg("p_complier"), py::arg("p_always"), py::arg("p_never"),
             py::arg("p_defier"), py::arg("treatment_propensity"))
        .def_readonly("p_complier", &ResponseTypeDistribution::p_complier)
        .def_readonly("p_always", &ResponseTypeDistribution::p_always)
        .def_readonly("p_never", &ResponseTypeDistribution::p_never)
        .def_readonly("p_defier", &ResponseTypeDistribution::p_defier)
        .def_readonly("treatment_propensity", &ResponseTypeDistribution::treatment_propensity)
        .def("true_pns", &ResponseTypeDistribution::true_pns)
        .def("true_pn", &ResponseTypeDistribution::true_pn)
        .def("true_ps", &ResponseTypeDistribution::true_ps)
        .def("experimental", &ResponseTypeDistribution::experimental)
        .def("observational", &ResponseTypeDistribution::observational);

    py::class_<ScmSample>(m, "ScmSample")
        .def_readonly("scm", &ScmSample::scm)
        .def_readonly("experimental", &ScmSample::experimental)
        .def_readonly("observational", &ScmSample::observational);

    py::class_<EnumeratedBounds>(m, "EnumeratedBounds")
        .def_readonly("pns", &EnumeratedBounds::pns)
        .def_readonly("pn", &EnumeratedBounds::pn)
        .def_readonly("ps", &EnumeratedBounds::ps);

    // Operations ------------------------------------------------------------
    m.def("estimate_experimental", &estimate_experimental, py::arg("table"));
    m.def("estimate_observational", &estimate_observational, py::arg("table"));
    m.def("check_consistency", &check_consistency, py::arg("experimental"),
          py::arg("observational"), py::arg("tolerance") = kInputTolerance);

    m.def("pns_bounds_experimental", &pns_bounds_experimental, py::arg("experimental"));
    m.def("pns_bounds_combined", &pns_bounds_combined, py::arg("experimental"),
          py::arg("observational"), py::arg("tolerance") = kInputTolerance);
    m.def("pn_bounds", &pn_bounds, py::arg("experimental"), py::arg("observational"),
          py::arg("tolerance") = kInputTolerance);
    m.def("ps_bounds", &ps_bounds, py::arg("experimental"), py::arg("observational"),
          py::arg("tolerance") = kInputTolerance);
    m.def("pns_point_identification", &pns_point_identification, py::arg("experimental"));

    m.def("feasible_interval_d", &feasible_interval_d, py::arg("experimental"));
    m.def("feasible_interval_d_prime", &feasible_interval_d_prime, py::arg("experimental"));
    m.def("expected_lower_gain", &expected_lower_gain, py::arg("experimental"));
    m.def("expected_upper_drop", &expected_upper_drop, py::arg("experimental"));
    m.def("lower_gain_cdf", &lower_gain_cdf, py::arg("experimental"), py::arg("z"));
    m.def("upper_drop_cdf", &upper_drop_cdf, py::arg("experimental"), py::arg("z"));
    m.def("improvement_report", &improvement_report, py::arg("experimental"));

    m.def("w_and_sigma", &w_and_sigma, py::arg("benefit"), py::arg("experimental"));
    m.def("benefit_bounds_experimental", &benefit_bounds_experimental, py::arg("benefit"),
          py::arg("experimental"));
    m.def("benefit_bounds_combined", &benefit_bounds_combined, py::arg("benefit"),
          py::arg("experimental"), py::arg("observational"),
          py::arg("tolerance") = kInputTolerance);
    m.def("benefit_expected_improvement", &benefit_expected_improvement, py::arg("benefit"),
          py::arg("experimental"));

    m.def("mc_expected_gain", &mc_expected_gain, py::arg("experimental"), py::arg("which"),
          py::arg("n"), py::arg("seed"));
    m.def("mc_improvement_samples", &mc_improvement_samples, py::arg("experimental"),
          py::arg("which"), py::arg("n"), py::arg("seed"));
    m.def("quadrature_expected_gain", &quadrature_expected_gain, py::arg("experimental"),
          py::arg("which"), py::arg("panels"));
    m.def("sample_scm", &sample_scm, py::arg("seed"));
    m.def("lp_vertex_enumeration", &lp_vertex_enumeration, py::arg("experimental"),
          py::arg("observational"), py::arg("grid_step") = 1e-3);
}
