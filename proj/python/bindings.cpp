#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "utm/control.hpp"
#include "utm/halfline.hpp"
#include "utm/interval.hpp"
#include "utm/oracle.hpp"

namespace py = pybind11;
using namespace utm;
using namespace pybind11::literals;

namespace {

Params params_of(const py::kwargs& kw) {
  Params p;
  for (const auto& [k, v] : kw) p[py::cast<std::string>(k)] = py::cast<double>(v);
  return p;
}

py::dict certificate_dict(const CertificateReport& r) {
  return py::dict("lambda_star"_a = r.lambda_star, "gap"_a = r.gap, "M"_a = r.M, "verdict"_a = to_string(r.verdict),
                  "tolerance"_a = r.tolerance, "interpretation"_a = r.interpretation);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transform-method solvers and controllability diagnostics for the 1-D heat equation";

  // The type lives on as a module attribute; the translator keeps a raw
  // pointer to it.
  static PyObject* error_type = py::exception<Error>(m, "UtmError", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<Profile>(m, "Profile")
      .def_static("half_line", [](const std::string& id, const py::kwargs& kw) {
        return Profile::closed_form(Domain::half_line(), id, params_of(kw));
      }, "id"_a)
      .def_static("interval", [](double L, const std::string& id, const py::kwargs& kw) {
        return Profile::closed_form(Domain::interval(L), id, params_of(kw));
      }, "L"_a, "id"_a)
      .def_static("sampled_half_line", [](std::vector<double> x, std::vector<double> v, std::optional<double> decay) {
        return Profile::sampled(Domain::half_line(), std::move(x), std::move(v), SampleQuadrature::trapezoid, decay);
      }, "x"_a, "values"_a, "decay_hint"_a = py::none())
      .def_static("registry", &Profile::registry)
      .def("__call__", &Profile::operator(), "x"_a)
      .def_property_readonly("id", &Profile::id);

  py::class_<TimeSignal>(m, "TimeSignal")
      .def_static("closed_form", [](double T, const std::string& id, const py::kwargs& kw) {
        return TimeSignal::closed_form(T, id, params_of(kw));
      }, "T"_a, "id"_a)
      .def_static("basis", [](double T, const std::string& kind, std::vector<double> c) {
        return TimeSignal::basis(T, basis_from_string(kind), std::move(c));
      }, "T"_a, "kind"_a, "coefficients"_a)
      .def_static("zero", &TimeSignal::zero, "T"_a)
      .def("__call__", &TimeSignal::operator(), "t"_a);

  m.def("solve_halfline", [](const Profile& u0, const TimeSignal& g, double T, std::vector<double> xs, double t) {
    std::vector<double> out;
    for (const auto& r : solve_profile(HalfLineProblem(u0, g, T), xs, t)) out.push_back(r.value);
    return out;
  }, "u0"_a, "g"_a, "T"_a, "x"_a, "t"_a);

  m.def("solve_interval", [](const Profile& u0, const TimeSignal& h, double T, std::vector<double> xs) {
    return terminal_profile(IntervalProblem(u0, h, T), xs).values;
  }, "u0"_a, "h"_a, "T"_a, "x"_a);

  m.def("certify", [](const Profile& u0, std::optional<std::vector<double>> scan) {
    return certificate_dict(scan ? obstruction_certificate(u0, *scan) : obstruction_certificate(u0));
  }, "u0"_a, "scan"_a = py::none());

  m.def("growth_test", [](const TimeSignal& g, std::vector<double> k) {
    const GrowthReport r = yosida_growth_test(g, k);
    std::vector<double> logs;
    for (const auto& row : r.rows) logs.push_back(row.log_abs);
    return py::dict("flag"_a = to_string(r.flag), "slope"_a = r.slope, "r_squared"_a = r.r_squared, "log_abs"_a = logs);
  }, "g"_a, "k"_a);

  m.def("synthesize", [](const Profile& u0, double T, int K, std::optional<double> mu) {
    SynthesisOptions o;
    o.K = K;
    o.mu = mu;
    const ControlSolution s = synthesize_interval_control(u0, T, o);
    return py::dict("coefficients"_a = s.coefficients, "terminal_rel_norm"_a = s.terminal_rel_norm,
                    "terminal_norm"_a = s.terminal_norm, "regularization"_a = s.regularization);
  }, "u0"_a, "T"_a, "K"_a = 12, "mu"_a = py::none());

  m.def("attempt_halfline", [](const Profile& u0, double T, std::vector<int> K_scan) {
    AttemptOptions o;
    o.K_scan = std::move(K_scan);
    const DichotomyReport r = attempt_halfline_control(u0, T, o);
    py::list rows;
    for (const auto& row : r.rows)
      rows.append(py::dict("K"_a = row.K, "best_terminal_rel_norm"_a = row.best_terminal_rel_norm,
                           "control_norm"_a = row.control_norm, "growth"_a = to_string(row.growth)));
    return py::dict("rows"_a = rows, "baseline_rel_norm"_a = r.baseline_rel_norm, "evaluations"_a = r.evaluations,
                    "certificate"_a = certificate_dict(r.certificate));
  }, "u0"_a, "T"_a, "K_scan"_a = std::vector<int>{2, 4, 8, 16});

  m.def("crank_nicolson_halfline", [](const Profile& u0, const TimeSignal& g, double x_max, int nx, int nt, double T) {
    const GridSolution s = crank_nicolson_halfline(u0, g, x_max, nx, nt, T);
    return py::make_tuple(s.x_grid, s.final_values(), s.meta.reliable);
  }, "u0"_a, "g"_a, "x_max"_a, "nx"_a, "nt"_a, "T"_a);

  m.def("crank_nicolson_interval", [](const Profile& u0, const TimeSignal& h, double L, double T, int nx, int nt) {
    const GridSolution s = crank_nicolson_interval(u0, h, L, T, nx, nt);
    return py::make_tuple(s.x_grid, s.final_values());
  }, "u0"_a, "h"_a, "L"_a, "T"_a, "nx"_a, "nt"_a);

  m.def("erfc", &erfc_reference, "x"_a);

  m.def("cli", [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "args"_a, "Runs a utm-heat subcommand; returns (exit code, stdout, stderr).");
}
