#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "json.hpp"
#include "mee/approx.hpp"
#include "mee/densities.hpp"
#include "mee/error.hpp"
#include "mee/estimate.hpp"
#include "mee/rearrange.hpp"
#include "mee/risks.hpp"
#include "mee/selftest.hpp"

namespace py = pybind11;
using namespace mee;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

CsumFamily family_from_text(const std::string& text) {
    nlohmann::json spec;
    try {
        spec = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed family JSON: ") + e.what());
    }
    return family_from_json(spec);
}

ShiftAssignment shifts_or_median(const CsumFamily& f, const std::optional<std::vector<double>>& shifts) {
    return shifts ? ShiftAssignment{*shifts} : median_assignment(f);
}

py::dict report_dict(const TheoremReport& r) {
    py::dict d;
    d["alpha"] = r.alpha;
    d["component"] = r.candidate.component;
    d["perturbation"] = r.candidate.perturbation;
    d["shifts"] = r.candidate.shifts.shifts;
    d["v_median"] = r.v_median;
    d["v_candidate"] = r.v_candidate;
    d["gap"] = r.gap;
    d["verdict"] = to_string(r.verdict);
    d["renyi_consistent"] = r.renyi_consistent;
    d["csum"] = r.csum;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Minimum error entropy estimation on symmetric unimodal mixtures";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<CsumFamily>(m, "Family")
        .def(py::init(&family_from_text), py::arg("spec_json"))
        .def_property_readonly("size", &CsumFamily::size)
        .def_property_readonly("s_max", &CsumFamily::s_max)
        .def_property_readonly("is_csum", &CsumFamily::is_csum)
        .def_property_readonly("grid",
                               [](const CsumFamily& f) {
                                   const Grid& g = f.grid();
                                   return py::make_tuple(g.x_min(), g.x_max(), g.size());
                               })
        .def_property_readonly("x",
                               [](const CsumFamily& f) {
                                   std::vector<double> x(f.grid().size());
                                   for (std::size_t i = 0; i < x.size(); ++i) x[i] = f.grid().x(i);
                                   return to_array(x);
                               })
        .def("median_assignment", [](const CsumFamily& f) { return median_assignment(f).shifts; })
        .def("__len__", &CsumFamily::size);

    m.def(
        "error_pdf",
        [](const CsumFamily& f, std::optional<std::vector<double>> shifts) {
            return to_array(mixture_error_pdf(f, shifts_or_median(f, shifts)).values());
        },
        py::arg("family"), py::arg("shifts") = py::none(),
        "Error density on the family grid; the median assignment by default.");

    m.def(
        "risk",
        [](const CsumFamily& f, const std::string& spec, std::optional<std::vector<double>> shifts) {
            return evaluate(RiskSpec::parse(spec), mixture_error_pdf(f, shifts_or_median(f, shifts)));
        },
        py::arg("family"), py::arg("spec"), py::arg("shifts") = py::none(),
        "Risk `mse | mad | zero-one | shannon | renyi:<a> | ip:<a>` of the error density.");

    m.def(
        "theorem_gap",
        [](const CsumFamily& f, double alpha, std::vector<double> shifts) {
            return report_dict(theorem_gap(f, alpha, ShiftAssignment{std::move(shifts)}));
        },
        py::arg("family"), py::arg("alpha"), py::arg("shifts"));

    m.def(
        "verify",
        [](const CsumFamily& f, std::vector<double> alphas, double step, double half_width, bool joint, int jobs) {
            const PerturbationConfig pc{joint ? PerturbationMode::Joint : PerturbationMode::PerComponent, step,
                                        half_width};
            std::vector<TheoremReport> reports;
            {
                py::gil_scoped_release release;
                reports = verify_theorem(f, alphas, perturbation_grid(f, pc), jobs);
            }
            py::list out;
            for (const auto& r : reports) out.append(report_dict(r));
            return out;
        },
        py::arg("family"), py::arg("alphas"), py::arg("step") = 0.1, py::arg("half_width") = 2.0,
        py::arg("joint") = false, py::arg("jobs") = 1);

    m.def(
        "optimize",
        [](const CsumFamily& f, const std::string& spec, double step, double half_width, int restarts,
           std::uint64_t seed, int jobs) {
            SearchConfig sc;
            sc.step = step;
            sc.half_width = half_width;
            sc.restarts = restarts;
            sc.seed = seed;
            OptimizeResult r;
            const RiskSpec rs = RiskSpec::parse(spec);
            {
                py::gil_scoped_release release;
                r = optimize_shifts(f, rs, sc, jobs);
            }
            return py::make_tuple(r.best_shifts.shifts, r.best_value, r.evaluations);
        },
        py::arg("family"), py::arg("spec"), py::arg("step") = 0.05, py::arg("half_width") = 0.5,
        py::arg("restarts") = 0, py::arg("seed") = 0, py::arg("jobs") = 1,
        "Returns (best_shifts, best_value, evaluations).");

    m.def(
        "rearrange",
        [](std::vector<double> values, double x_min, double x_max) {
            const Grid g(x_min, x_max, values.size());
            return to_array(decreasing_rearrangement(GridFunction(g, std::move(values))).values());
        },
        py::arg("values"), py::arg("x_min"), py::arg("x_max"),
        "Decreasing rearrangement of samples on [x_min, x_max], on abscissae k * delta.");

    m.def(
        "convergence",
        [](const CsumFamily& f, std::vector<int> n_list, double alpha, double l1_threshold,
           std::optional<std::vector<double>> shifts) {
            const auto rep = convergence_report(f, shifts_or_median(f, shifts), n_list, alpha, l1_threshold);
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict d;
                d["n"] = r.n;
                d["l1_gap"] = r.l1_gap;
                d["v_alpha_fn"] = r.v_alpha_fn;
                d["v_alpha_p"] = r.v_alpha_p;
                d["domination_violation"] = r.domination_violation;
                d["pass"] = r.pass;
                rows.append(d);
            }
            py::dict out;
            out["rows"] = rows;
            out["l1_monotone"] = rep.l1_monotone;
            out["l1_below_threshold"] = rep.l1_below_threshold;
            out["pass"] = rep.pass;
            return out;
        },
        py::arg("family"), py::arg("n_list"), py::arg("alpha") = 2.0, py::arg("l1_threshold") = 5e-3,
        py::arg("shifts") = py::none());

    m.def(
        "self_test",
        [](const std::filesystem::path& out_dir, std::uint64_t seed, int jobs) {
            std::vector<CriterionResult> results;
            {
                py::gil_scoped_release release;
                results = run_self_test(out_dir, seed, jobs);
            }
            py::list out;
            for (const auto& r : results) out.append(py::make_tuple(r.id, r.name, r.pass, r.detail));
            return out;
        },
        py::arg("out_dir"), py::arg("seed") = 2026, py::arg("jobs") = 1,
        "Runs the self-test criteria; returns (id, name, pass, detail) tuples.");
}
