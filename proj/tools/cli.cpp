#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "utm/control.hpp"
#include "utm/error.hpp"
#include "utm/halfline.hpp"
#include "utm/halfspace.hpp"
#include "utm/interval.hpp"
#include "utm/oracle.hpp"
#include "utm/transforms.hpp"

namespace utm::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kVersion = "0.1.0";

const std::vector<std::string> kCommands{"solve-halfline", "solve-interval",   "check-gr",
                                         "certify",        "growth-test",      "synthesize",
                                         "attempt-halfline", "dichotomy",      "halfspace-certify",
                                         "oracle-compare"};

// ---------------------------------------------------------------------------
// Validation helpers

void allow_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::validation, where + " must be an object");
  for (const auto& [k, _] : j.items())
    if (!keys.count(k)) fail(ErrorKind::validation, "unknown key '" + k + "' in " + where);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(ErrorKind::validation, where + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorKind::validation, where + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::validation, where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where));
  return out;
}

std::vector<int> integers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::validation, where + " must be an array of integers");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(integer(v, where));
  return out;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(ErrorKind::validation, where + " must be a string");
  return j.get<std::string>();
}

Params params_of(const json& j, const std::string& where) {
  Params p;
  if (j.is_null()) return p;
  if (!j.is_object()) fail(ErrorKind::validation, where + " must be an object");
  for (const auto& [k, v] : j.items()) p[k] = number(v, where + "." + k);
  return p;
}

// ---------------------------------------------------------------------------
// Short syntax: id[:v1,k=v2,...]

const std::map<std::string, std::string> kPositional{
    {"exp_decay", "a"}, {"indicator", "b"}, {"sine_mode", "n"}, {"gaussian_bump", "c"}, {"poly_exp", "a"},
    {"const", "c"},     {"exp", "c"},       {"sine", "c"},      {"gaussian", "w"},      {"two_sided_exp", "c"},
    {"plane_wave", "alpha"}};

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::validation, "cannot parse '" + s + "' as a number in " + where);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

json parse_entry(const std::string& s, const std::string& where) {
  const auto colon = s.find(':');
  const std::string id = s.substr(0, colon);
  if (id.empty()) fail(ErrorKind::validation, "empty id in " + where);
  json out{{"id", id}, {"params", json::object()}};
  if (colon == std::string::npos) return out;
  const std::string rest = s.substr(colon + 1);
  const bool is_basis = id == "legendre" || id == "piecewise_constant" || id == "sine_basis";
  if (is_basis) {
    json coeffs = json::array();
    for (const auto& tok : split(rest, ',')) coeffs.push_back(parse_double(tok, where));
    return {{"basis", id == "sine_basis" ? "sine" : id}, {"coefficients", coeffs}};
  }
  for (const auto& tok : split(rest, ',')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      const auto it = kPositional.find(id);
      if (it == kPositional.end()) fail(ErrorKind::validation, "'" + id + "' takes no positional parameter");
      out["params"][it->second] = parse_double(tok, where);
    } else {
      out["params"][tok.substr(0, eq)] = parse_double(tok.substr(eq + 1), where);
    }
  }
  return out;
}

// "a,b,c" or "lo:hi:count" (linear).
json parse_list(const std::string& s, const std::string& where) {
  json out = json::array();
  const auto parts = split(s, ':');
  if (parts.size() == 3) {
    const double lo = parse_double(parts[0], where), hi = parse_double(parts[1], where);
    const int n = static_cast<int>(parse_double(parts[2], where));
    if (n < 1) fail(ErrorKind::validation, where + " needs a positive count");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  for (const auto& tok : split(s, ',')) out.push_back(parse_double(tok, where));
  return out;
}

json parse_scan(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3 && parts.size() != 4) fail(ErrorKind::validation, "--scan expects lo:hi:count[:log|linear]");
  json out{{"lo", parse_double(parts[0], "--scan")},
           {"hi", parse_double(parts[1], "--scan")},
           {"count", static_cast<int>(parse_double(parts[2], "--scan"))},
           {"log", true}};
  if (parts.size() == 4) {
    if (parts[3] != "log" && parts[3] != "linear") fail(ErrorKind::validation, "--scan spacing must be log or linear");
    out["log"] = parts[3] == "log";
  }
  return out;
}

// "re,im;re,im;..."
json parse_lambdas(const std::string& s) {
  json out = json::array();
  for (const auto& pt : split(s, ';')) {
    const auto c = split(pt, ',');
    if (c.size() != 2) fail(ErrorKind::validation, "--lambda expects re,im pairs separated by ';'");
    out.push_back({parse_double(c[0], "--lambda"), parse_double(c[1], "--lambda")});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Document → objects

Profile profile_from(const json& j, Domain domain, const std::string& where) {
  if (j.contains("samples")) {
    allow_keys(j, {"samples"}, where);
    const json& s = j["samples"];
    allow_keys(s, {"grid", "values", "quadrature", "decay_hint", "tail_eps"}, where + ".samples");
    if (!s.contains("grid") || !s.contains("values")) fail(ErrorKind::validation, where + ".samples needs grid and values");
    SampleQuadrature q = SampleQuadrature::trapezoid;
    if (s.contains("quadrature")) {
      const std::string name = text(s["quadrature"], where + ".samples.quadrature");
      if (name == "gauss_legendre") q = SampleQuadrature::gauss_legendre;
      else if (name != "trapezoid") fail(ErrorKind::validation, "quadrature must be trapezoid or gauss_legendre");
    }
    std::optional<double> hint;
    if (s.contains("decay_hint") && !s["decay_hint"].is_null()) hint = number(s["decay_hint"], where + ".decay_hint");
    const double eps = s.contains("tail_eps") ? number(s["tail_eps"], where + ".tail_eps") : 1e-14;
    return Profile::sampled(domain, numbers(s["grid"], where + ".grid"), numbers(s["values"], where + ".values"), q,
                            hint, eps);
  }
  allow_keys(j, {"id", "params"}, where);
  if (!j.contains("id")) fail(ErrorKind::validation, where + " needs an id or samples");
  return Profile::closed_form(domain, text(j["id"], where + ".id"),
                              params_of(j.value("params", json::object()), where + ".params"));
}

TimeSignal signal_from(const json& j, double T, const std::string& where) {
  if (j.contains("basis")) {
    allow_keys(j, {"basis", "coefficients"}, where);
    return TimeSignal::basis(T, basis_from_string(text(j["basis"], where + ".basis")),
                             numbers(j.value("coefficients", json::array()), where + ".coefficients"));
  }
  allow_keys(j, {"id", "params"}, where);
  if (!j.contains("id")) fail(ErrorKind::validation, where + " needs an id or a basis");
  return TimeSignal::closed_form(T, text(j["id"], where + ".id"),
                                 params_of(j.value("params", json::object()), where + ".params"));
}

Tangential tangential_from(const json& j, const std::string& where) {
  allow_keys(j, {"id", "params"}, where);
  if (!j.contains("id")) fail(ErrorKind::validation, where + " needs an id");
  return Tangential::closed_form(text(j["id"], where + ".id"), params_of(j.value("params", json::object()), where));
}

ContourConfig contour_from(const json& c) {
  ContourConfig cfg;
  cfg.theta = number(c["theta"], "contour.theta");
  if (!c["lambda_max"].is_null()) cfg.lambda_max = number(c["lambda_max"], "contour.lambda_max");
  cfg.panels = integer(c["panels"], "contour.panels");
  if (!c["indent"].is_null()) cfg.indent = number(c["indent"], "contour.indent");
  cfg.order = integer(c["order"], "contour.order");
  require(cfg.theta > 0.0 && cfg.theta < kPi / 4.0, "contour.theta must lie in (0, π/4)");
  require(cfg.panels >= 1, "contour.panels must be at least 1");
  require(cfg.order >= 2 && cfg.order <= 256, "contour.order must lie in [2, 256]");
  return cfg;
}

std::vector<double> scan_points(const json& s) {
  ScanGrid g;
  g.lo = number(s["lo"], "scan.lo");
  g.hi = number(s["hi"], "scan.hi");
  g.count = integer(s["count"], "scan.count");
  g.logarithmic = s["log"].get<bool>();
  return g.points();
}

std::string scan_text(const json& s) {
  ScanGrid g;
  g.lo = s["lo"].get<double>();
  g.hi = s["hi"].get<double>();
  g.count = s["count"].get<int>();
  g.logarithmic = s["log"].get<bool>();
  return g.describe();
}

json scaled_json(const ScaledComplex& z) {
  return {{"mantissa_re", z.mantissa.real()}, {"mantissa_im", z.mantissa.imag()}, {"exponent", z.exponent}};
}

json certificate_json(const CertificateReport& r) {
  return {{"lambda_star", r.lambda_star},     {"gap", r.gap},   {"M", r.M},
          {"verdict", to_string(r.verdict)},  {"tolerance", r.tolerance},
          {"scan", r.scan},                   {"interpretation", r.interpretation}};
}

// ---------------------------------------------------------------------------
// Defaults

json default_params(const std::string& cmd) {
  const json scan{{"lo", 1e-2}, {"hi", 1e2}, {"count", 400}, {"log", true}};
  if (cmd == "solve-halfline") return {{"x", nullptr}, {"t", nullptr}};
  if (cmd == "solve-interval") return {{"x", nullptr}};
  if (cmd == "check-gr") return {{"family", "exp"}, {"a", 1.0}, {"n", 1}, {"lambda", nullptr}, {"t", nullptr}};
  if (cmd == "certify") return {{"scan", scan}, {"tolerance", kCertificateTol}};
  if (cmd == "growth-test") return {{"k", nullptr}, {"bound", nullptr}};
  if (cmd == "synthesize")
    return {{"K", 12}, {"mu", nullptr}, {"basis", "legendre"}, {"collocation", kDefaultCollocation}};
  if (cmd == "attempt-halfline")
    return {{"K_scan", {2, 4, 8, 16}}, {"mu", nullptr}, {"basis", "legendre"}, {"extent", kHalfLineNormExtent}};
  if (cmd == "dichotomy")
    return {{"interval_u0", {{"id", "sine_mode"}, {"params", {{"n", 1.0}}}}},
            {"interval_T", 0.5},
            {"K", 12},
            {"K_scan", {2, 4, 8, 16}},
            {"mu", nullptr},
            {"basis", "legendre"}};
  if (cmd == "halfspace-certify")
    return {{"lambda_t", {-1.0, -0.5, 0.0, 0.5, 1.0}}, {"scan", scan}, {"tolerance", kCertificateTol}};
  if (cmd == "oracle-compare") return {{"x", nullptr}, {"nx", nullptr}, {"nt", nullptr}, {"x_max", 12.0}};
  return json::object();
}

std::string default_problem(const std::string& cmd, const json& params) {
  if (cmd == "solve-interval" || cmd == "synthesize") return "interval";
  if (cmd == "halfspace-certify") return "half_space_2d";
  if (cmd == "check-gr" && params.contains("family") && params["family"] == "sine") return "interval";
  return "half_line";
}

json default_contour() {
  return {{"theta", kDefaultTheta}, {"lambda_max", nullptr}, {"panels", kDefaultPanels}, {"indent", nullptr},
          {"order", kDefaultOrder}};
}

json config_json() {
  return {{"version", kVersion},
          {"theta_default", kDefaultTheta},
          {"panels_default", kDefaultPanels},
          {"order_default", kDefaultOrder},
          {"lambda_max_policy",
           "max(sqrt(40/(t cos 2θ)), 32/(d sin θ)) per integral, d the decay distance of its exponential"},
          {"indent_policy", "interval: min(0.1, π/(4L)); half line: none"},
          {"tikhonov_relative", kTikhonovRelative},
          {"imag_diagnostic", kImagDiagnostic},
          {"imag_failure", kImagFailure},
          {"certificate_tolerance", kCertificateTol},
          {"growth_slope_min", kGrowthSlopeMin},
          {"norm_grid_points", kNormGridPoints}};
}

}  // namespace

const std::vector<std::string>& subcommands() { return kCommands; }

const std::map<std::string, std::string> kAbout{
    {"solve-halfline", "u(x, t) on the half-line from the integral representation"},
    {"solve-interval", "terminal profile u(x, T) on [0, L]"},
    {"check-gr", "global relation residuals for a manufactured solution"},
    {"certify", "obstruction certificate for a half-line initial datum"},
    {"growth-test", "growth of the boundary datum's t-transform in lambda^2"},
    {"synthesize", "least-squares boundary control on [0, L]"},
    {"attempt-halfline", "best achievable terminal norms on the half-line"},
    {"dichotomy", "interval control against the half-line attempt"},
    {"halfspace-certify", "per-slice certificates for a separable half-space datum"},
    {"oracle-compare", "representation against Crank-Nicolson"},
};

json normalize(const json& in) {
  allow_keys(in, {"command", "problem", "u0", "g", "h", "T", "L", "contour", "params", "output"}, "spec");
  json s = in;
  if (!s.contains("command")) fail(ErrorKind::validation, "spec needs a command");
  const std::string cmd = text(s["command"], "command");
  if (std::find(kCommands.begin(), kCommands.end(), cmd) == kCommands.end())
    fail(ErrorKind::validation, "unknown command '" + cmd + "'");

  json params = default_params(cmd);
  if (s.contains("params")) {
    std::set<std::string> keys;
    for (const auto& [k, _] : params.items()) keys.insert(k);
    allow_keys(s["params"], keys, "params");
    for (const auto& [k, v] : s["params"].items()) params[k] = v;
  }
  s["params"] = params;

  if (!s.contains("problem")) s["problem"] = default_problem(cmd, params);
  const std::string problem = text(s["problem"], "problem");
  if (problem != "half_line" && problem != "interval" && problem != "half_space_2d")
    fail(ErrorKind::validation, "problem must be half_line, interval or half_space_2d");

  if (!s.contains("T")) s["T"] = 1.0;
  number(s["T"], "T");
  if (problem == "interval") {
    if (!s.contains("L")) s["L"] = 1.0;
    number(s["L"], "L");
  } else if (s.contains("L") && cmd != "dichotomy") {
    fail(ErrorKind::validation, "L applies to interval problems only");
  }
  if (cmd == "dichotomy" && !s.contains("L")) s["L"] = 1.0;

  if (!s.contains("g")) s["g"] = {{"id", "zero"}, {"params", json::object()}};
  if (!s.contains("h")) s["h"] = {{"id", "zero"}, {"params", json::object()}};
  if (cmd == "dichotomy" && !s.contains("u0")) s["u0"] = {{"id", "exp_decay"}, {"params", {{"a", 1.0}}}};

  json contour = default_contour();
  if (s.contains("contour")) {
    allow_keys(s["contour"], {"theta", "lambda_max", "panels", "indent", "order"}, "contour");
    for (const auto& [k, v] : s["contour"].items()) contour[k] = v;
  }
  s["contour"] = contour;

  json output{{"path", nullptr}, {"format", cmd == "halfspace-certify" ? "jsonl" : "json"}};
  if (s.contains("output")) {
    allow_keys(s["output"], {"path", "format"}, "output");
    for (const auto& [k, v] : s["output"].items()) output[k] = v;
  }
  const std::string fmt = text(output["format"], "output.format");
  if (fmt != "json" && fmt != "csv" && fmt != "jsonl") fail(ErrorKind::validation, "output.format must be json, csv or jsonl");
  s["output"] = output;
  return s;
}

namespace {

// ---------------------------------------------------------------------------
// Commands. Each returns the result object; tabular parts live in "rows".

using Runner = json (*)(const json& s, const ContourConfig& cfg);

std::vector<double> default_interior(double L, int n = 19) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = L * (i + 1) / (n + 1);
  return x;
}

json run_solve_halfline(const json& s, const ContourConfig& cfg) {
  const double T = number(s["T"], "T");
  if (!s.contains("u0")) fail(ErrorKind::validation, "solve-halfline needs u0");
  HalfLineProblem p(profile_from(s["u0"], Domain::half_line(), "u0"), signal_from(s["g"], T, "g"), T);
  const json& pr = s["params"];
  if (pr["x"].is_null()) fail(ErrorKind::validation, "solve-halfline needs params.x");
  const auto xs = numbers(pr["x"], "params.x");
  const double t = pr["t"].is_null() ? T : number(pr["t"], "params.t");
  const auto sol = solve_profile(p, xs, t, cfg);
  json rows = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i)
    rows.push_back({{"x", xs[i]}, {"t", t}, {"value", sol[i].value}, {"imag", sol[i].imag}});
  return {{"rows", rows}};
}

json run_solve_interval(const json& s, const ContourConfig& cfg) {
  const double T = number(s["T"], "T"), L = number(s["L"], "L");
  if (!s.contains("u0")) fail(ErrorKind::validation, "solve-interval needs u0");
  IntervalProblem p(profile_from(s["u0"], Domain::interval(L), "u0"), signal_from(s["h"], T, "h"), T);
  const json& pr = s["params"];
  const auto xs = pr["x"].is_null() ? default_interior(L) : numbers(pr["x"], "params.x");
  const TerminalProfile tp = terminal_profile(p, xs, cfg);
  json rows = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i)
    rows.push_back({{"x", xs[i]}, {"value", tp.values[i]}, {"imag", tp.imag[i]}});
  return {{"rows", rows}, {"compatible", p.compatible}, {"indent", tp.indent}};
}

json run_check_gr(const json& s, const ContourConfig&) {
  const json& pr = s["params"];
  const std::string family = text(pr["family"], "params.family");
  const double T = number(s["T"], "T");
  if (pr["lambda"].is_null()) fail(ErrorKind::validation, "check-gr needs params.lambda");
  std::vector<cplx> lambdas;
  for (const auto& l : pr["lambda"]) {
    const auto v = numbers(l, "params.lambda");
    if (v.size() != 2) fail(ErrorKind::validation, "params.lambda entries must be [re, im]");
    lambdas.emplace_back(v[0], v[1]);
  }
  json rows = json::array();
  double worst = 0.0;
  auto add = [&](cplx l, const RelationResidual& r) {
    worst = std::max(worst, r.magnitude());
    json row{{"lambda_re", l.real()}, {"lambda_im", l.imag()},  {"residual_re", r.scaled().real()},
             {"residual_im", r.scaled().imag()}, {"magnitude", r.magnitude()}, {"scale_exponent", r.scale_exponent}};
    row.update(scaled_json(r.value));
    rows.push_back(row);
  };
  if (family == "exp") {
    if (s["problem"] != "half_line") fail(ErrorKind::validation, "family exp is a half-line family");
    const double a = number(pr["a"], "params.a");
    const double t = pr["t"].is_null() ? T : number(pr["t"], "params.t");
    const HalfLineProblem p = manufactured_exp_problem(a, T);
    const Profile snap = manufactured_exp_snapshot(a, t);
    for (cplx l : lambdas) add(l, global_relation_residual(p, snap, t, l));
  } else if (family == "sine") {
    if (s["problem"] != "interval") fail(ErrorKind::validation, "family sine is an interval family");
    const double L = number(s["L"], "L");
    const int n = integer(pr["n"], "params.n");
    require(n >= 1, "params.n must be positive");
    const double k = n * kPi / L, rate = -k * k;
    const IntervalProblem p(Profile::closed_form(Domain::interval(L), "sine_mode", {{"n", n}}), TimeSignal::zero(T), T);
    const TimeSignal g1 = TimeSignal::closed_form(T, "exp", {{"c", k}, {"b", rate}});
    const TimeSignal h1 = TimeSignal::closed_form(T, "exp", {{"c", k * std::cos(n * kPi)}, {"b", rate}});
    const Profile snap = Profile::closed_form(Domain::interval(L), "sine_mode", {{"n", n}, {"amp", std::exp(rate * T)}});
    for (cplx l : lambdas) add(l, interval_global_relation_residual(p, g1, h1, snap, l));
  } else {
    fail(ErrorKind::validation, "params.family must be exp or sine");
  }
  return {{"rows", rows}, {"max_magnitude", worst}};
}

json run_certify(const json& s, const ContourConfig&) {
  if (!s.contains("u0")) fail(ErrorKind::validation, "certify needs u0");
  const Profile u0 = profile_from(s["u0"], Domain::half_line(), "u0");
  const json& pr = s["params"];
  allow_keys(pr["scan"], {"lo", "hi", "count", "log"}, "params.scan");
  const auto pts = scan_points(pr["scan"]);
  return certificate_json(obstruction_certificate(u0, pts, number(pr["tolerance"], "params.tolerance"),
                                                  scan_text(pr["scan"])));
}

json run_growth_test(const json& s, const ContourConfig&) {
  const double T = number(s["T"], "T");
  const TimeSignal g = signal_from(s["g"], T, "g");
  const json& pr = s["params"];
  std::vector<double> k;
  if (pr["k"].is_null()) {
    for (int j = 1; j <= 40; ++j) k.push_back(1.0 + 39.0 * j / 40.0);
  } else {
    k = numbers(pr["k"], "params.k");
  }
  const double bound = pr["bound"].is_null() ? std::numeric_limits<double>::infinity() : number(pr["bound"], "params.bound");
  const GrowthReport r = yosida_growth_test(g, k, bound);
  json rows = json::array();
  for (const auto& row : r.rows) {
    json o{{"k", row.k}, {"log_abs", row.log_abs}};
    o.update(scaled_json(row.value));
    rows.push_back(o);
  }
  return {{"rows", rows},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"r_squared", r.r_squared},
          {"bound", std::isfinite(r.bound) ? json(r.bound) : json(nullptr)},
          {"flag", to_string(r.flag)}};
}

json control_json(const ControlSolution& c) {
  json hist = json::array();
  for (const auto& h : c.residual_history)
    hist.push_back({{"K", h.K}, {"collocation_residual", h.collocation_residual}, {"objective", h.objective}});
  json rows = json::array();
  const TimeSignal h = c.control();
  for (int i = 0; i <= 200; ++i) {
    const double t = c.T * i / 200.0;
    rows.push_back({{"t", t}, {"h", h(t)}});
  }
  return {{"basis", to_string(c.basis)},
          {"coefficients", c.coefficients},
          {"terminal_rel_norm", c.terminal_rel_norm},
          {"terminal_norm", c.terminal_norm},
          {"u0_norm", c.u0_norm},
          {"regularization", c.regularization},
          {"residual_history", hist},
          {"collocation", c.collocation},
          {"rows", rows}};
}

json run_synthesize(const json& s, const ContourConfig& cfg) {
  const double T = number(s["T"], "T"), L = number(s["L"], "L");
  if (!s.contains("u0")) fail(ErrorKind::validation, "synthesize needs u0");
  const json& pr = s["params"];
  SynthesisOptions o;
  o.K = integer(pr["K"], "params.K");
  if (!pr["mu"].is_null()) o.mu = number(pr["mu"], "params.mu");
  o.basis = basis_from_string(text(pr["basis"], "params.basis"));
  o.collocation = chebyshev_points(integer(pr["collocation"], "params.collocation"), L);
  o.contour = cfg;
  return control_json(synthesize_interval_control(profile_from(s["u0"], Domain::interval(L), "u0"), T, o));
}

json dichotomy_json(const DichotomyReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"K", row.K},
                    {"best_terminal_rel_norm", row.best_terminal_rel_norm},
                    {"control_norm", row.control_norm},
                    {"growth_flag", to_string(row.growth)},
                    {"growth_slope", row.growth_slope},
                    {"max_transform", row.max_transform}});
  json coeffs = json::array();
  for (const auto& row : r.rows) coeffs.push_back(row.coefficients);
  return {{"problem_kind", r.problem_kind},
          {"basis", to_string(r.basis)},
          {"rows", rows},
          {"coefficients", coeffs},
          {"baseline_rel_norm", r.baseline_rel_norm},
          {"evaluations", r.evaluations},
          {"certificate", certificate_json(r.certificate)},
          {"verdict_text", r.verdict_text}};
}

AttemptOptions attempt_options(const json& pr, const ContourConfig& cfg) {
  AttemptOptions o;
  o.K_scan = integers(pr["K_scan"], "params.K_scan");
  if (!pr["mu"].is_null()) o.mu = number(pr["mu"], "params.mu");
  o.basis = basis_from_string(text(pr["basis"], "params.basis"));
  if (pr.contains("extent")) o.extent = number(pr["extent"], "params.extent");
  o.contour = cfg;
  return o;
}

json run_attempt(const json& s, const ContourConfig& cfg) {
  if (!s.contains("u0")) fail(ErrorKind::validation, "attempt-halfline needs u0");
  const double T = number(s["T"], "T");
  return dichotomy_json(
      attempt_halfline_control(profile_from(s["u0"], Domain::half_line(), "u0"), T, attempt_options(s["params"], cfg)));
}

json run_dichotomy(const json& s, const ContourConfig& cfg) {
  const json& pr = s["params"];
  const double L = number(s["L"], "L");
  SynthesisOptions so;
  so.K = integer(pr["K"], "params.K");
  if (!pr["mu"].is_null()) so.mu = number(pr["mu"], "params.mu");
  so.basis = basis_from_string(text(pr["basis"], "params.basis"));
  so.contour = cfg;
  const ControlSolution c = synthesize_interval_control(profile_from(pr["interval_u0"], Domain::interval(L), "params.interval_u0"),
                                                        number(pr["interval_T"], "params.interval_T"), so);
  const DichotomyReport d =
      attempt_halfline_control(profile_from(s["u0"], Domain::half_line(), "u0"), number(s["T"], "T"), attempt_options(pr, cfg));
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& r : d.rows) floor = std::min(floor, r.best_terminal_rel_norm);
  const double ratio = c.terminal_rel_norm > 0.0 ? floor / c.terminal_rel_norm : std::numeric_limits<double>::infinity();
  json interval = control_json(c);
  interval.erase("rows");
  std::ostringstream os;
  os << "interval terminal norm " << c.terminal_rel_norm << " vs half-line floor " << floor << " (ratio "
     << ratio << "): " << (ratio >= 10.0 ? "separated by at least one order of magnitude" : "not separated");
  return {{"interval", interval},
          {"half_line", dichotomy_json(d)},
          {"rows", dichotomy_json(d)["rows"]},
          {"half_line_floor", floor},
          {"ratio", std::isfinite(ratio) ? json(ratio) : json(nullptr)},
          {"separated", ratio >= 10.0},
          {"verdict_text", os.str()}};
}

json run_halfspace(const json& s, const ContourConfig&) {
  if (!s.contains("u0")) fail(ErrorKind::validation, "halfspace-certify needs u0");
  const json& u = s["u0"];
  allow_keys(u, {"tangential", "normal"}, "u0");
  if (!u.contains("tangential") || !u.contains("normal"))
    fail(ErrorKind::validation, "half-space u0 needs tangential and normal factors");
  const HalfSpaceField field = HalfSpaceField::separable(tangential_from(u["tangential"], "u0.tangential"),
                                                         profile_from(u["normal"], Domain::half_line(), "u0.normal"));
  const double T = number(s["T"], "T");
  std::optional<SeparableSignal> g;
  if (s["g"].contains("tangential")) {
    allow_keys(s["g"], {"tangential", "time"}, "g");
    g = SeparableSignal{tangential_from(s["g"]["tangential"], "g.tangential"),
                        signal_from(s["g"].value("time", json{{"id", "zero"}}), T, "g.time")};
  } else if (!(s["g"].contains("id") && s["g"]["id"] == "zero")) {
    fail(ErrorKind::validation, "half-space g must be {tangential, time}");
  }
  const json& pr = s["params"];
  const auto lt = numbers(pr["lambda_t"], "params.lambda_t");
  allow_keys(pr["scan"], {"lo", "hi", "count", "log"}, "params.scan");
  const auto scan = scan_points(pr["scan"]);
  const HalfSpaceCertificate c = halfspace_obstruction_certificate(field, lt, scan, g ? &*g : nullptr, T,
                                                                   number(pr["tolerance"], "params.tolerance"));
  json rows = json::array();
  for (const auto& sl : c.slices) {
    json row{{"lambda_t", sl.lambda_t},
             {"weight_re", sl.tangential_weight.real()},
             {"weight_im", sl.tangential_weight.imag()},
             {"lambda_star", sl.report.lambda_star},
             {"gap", sl.report.gap},
             {"M", sl.report.M},
             {"verdict", to_string(sl.report.verdict)}};
    if (sl.F) {
      row["F_mantissa_re"] = sl.F->mantissa.real();
      row["F_mantissa_im"] = sl.F->mantissa.imag();
      row["F_exponent"] = sl.F->exponent;
    }
    rows.push_back(row);
  }
  return {{"rows", rows}, {"verdict", to_string(c.verdict)}, {"reduced_accuracy", c.reduced_accuracy}, {"scan", c.scan}};
}

json run_oracle_compare(const json& s, const ContourConfig& cfg) {
  if (!s.contains("u0")) fail(ErrorKind::validation, "oracle-compare needs u0");
  const double T = number(s["T"], "T");
  const json& pr = s["params"];
  json rows = json::array();
  double worst = 0.0;
  json meta;
  auto add = [&](double x, double a, double b) {
    worst = std::max(worst, std::abs(a - b));
    rows.push_back({{"x", x}, {"utm", a}, {"oracle", b}, {"diff", a - b}});
  };
  if (s["problem"] == "interval") {
    const double L = number(s["L"], "L");
    const Profile u0 = profile_from(s["u0"], Domain::interval(L), "u0");
    const TimeSignal h = signal_from(s["h"], T, "h");
    const auto xs = pr["x"].is_null() ? default_interior(L) : numbers(pr["x"], "params.x");
    const int nx = pr["nx"].is_null() ? 800 : integer(pr["nx"], "params.nx");
    const int nt = pr["nt"].is_null() ? 1600 : integer(pr["nt"], "params.nt");
    const TerminalProfile tp = terminal_profile(IntervalProblem(u0, h, T), xs, cfg);
    const GridSolution g = crank_nicolson_interval(u0, h, L, T, nx, nt);
    for (std::size_t i = 0; i < xs.size(); ++i) add(xs[i], tp.values[i], g.final_at(xs[i]));
    meta = {{"nx", nx}, {"nt", nt}, {"dx", g.meta.dx}, {"dt", g.meta.dt}};
  } else if (s["problem"] == "half_line") {
    const Profile u0 = profile_from(s["u0"], Domain::half_line(), "u0");
    const TimeSignal gsig = signal_from(s["g"], T, "g");
    if (pr["x"].is_null()) fail(ErrorKind::validation, "oracle-compare needs params.x on the half line");
    const auto xs = numbers(pr["x"], "params.x");
    const double xm = number(pr["x_max"], "params.x_max");
    const int nx = pr["nx"].is_null() ? static_cast<int>(std::lround(100 * xm)) : integer(pr["nx"], "params.nx");
    const int nt = pr["nt"].is_null() ? 1000 : integer(pr["nt"], "params.nt");
    const auto sol = solve_profile(HalfLineProblem(u0, gsig, T), xs, T, cfg);
    const GridSolution g = crank_nicolson_halfline(u0, gsig, xm, nx, nt, T);
    for (std::size_t i = 0; i < xs.size(); ++i) add(xs[i], sol[i].value, g.final_at(xs[i]));
    meta = {{"nx", nx},
            {"nt", nt},
            {"dx", g.meta.dx},
            {"dt", g.meta.dt},
            {"x_max", xm},
            {"truncation_estimate", g.meta.truncation_estimate},
            {"reliable", g.meta.reliable}};
  } else {
    fail(ErrorKind::validation, "oracle-compare supports half_line and interval problems");
  }
  return {{"rows", rows}, {"max_abs_diff", worst}, {"oracle", meta}};
}

const std::map<std::string, Runner> kRunners{
    {"solve-halfline", run_solve_halfline}, {"solve-interval", run_solve_interval},
    {"check-gr", run_check_gr},             {"certify", run_certify},
    {"growth-test", run_growth_test},       {"synthesize", run_synthesize},
    {"attempt-halfline", run_attempt},      {"dichotomy", run_dichotomy},
    {"halfspace-certify", run_halfspace},   {"oracle-compare", run_oracle_compare}};

// ---------------------------------------------------------------------------
// Output

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_csv(const json& doc, std::ostream& os) {
  os << "# " << json{{"command", doc["command"]}, {"spec", doc["spec"]}, {"config", doc["config"]}}.dump() << "\n";
  const json& result = doc["result"];
  if (result.contains("rows") && result["rows"].is_array() && !result["rows"].empty()) {
    std::vector<std::string> cols;
    for (const auto& row : result["rows"])
      for (const auto& [k, _] : row.items())
        if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& row : result["rows"]) {
      for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : "");
      os << "\n";
    }
    return;
  }
  os << "key,value\n";
  for (const auto& [k, v] : result.items()) os << k << "," << (v.is_structured() ? "\"" + v.dump() + "\"" : csv_cell(v)) << "\n";
}

void write_jsonl(const json& doc, std::ostream& os) {
  os << json{{"command", doc["command"]}, {"spec", doc["spec"]}, {"config", doc["config"]}}.dump() << "\n";
  const json& result = doc["result"];
  if (result.contains("rows"))
    for (const auto& row : result["rows"]) os << row.dump() << "\n";
  json rest = result;
  rest.erase("rows");
  os << json{{"summary", rest}}.dump() << "\n";
}

void emit(const json& doc, std::ostream& out) {
  const json& o = doc["spec"]["output"];
  const std::string fmt = o["format"];
  std::ofstream file;
  std::ostream* os = &out;
  if (!o["path"].is_null()) {
    file.open(o["path"].get<std::string>());
    if (!file) fail(ErrorKind::validation, "cannot open output path " + o["path"].get<std::string>());
    os = &file;
  }
  if (fmt == "csv") write_csv(doc, *os);
  else if (fmt == "jsonl") write_jsonl(doc, *os);
  else *os << doc.dump(2) << "\n";
}

json load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::validation, "cannot read spec file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    // JSON lines or CSV output: the spec sits in the first line.
    std::string first = text.substr(0, text.find('\n'));
    if (first.rfind("# ", 0) == 0) first = first.substr(2);
    j = json::parse(first, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::validation, "spec file " + path + " is not JSON");
  }
  if (j.contains("spec") && j.contains("command")) return j["spec"];
  return j;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::accuracy:
    case ErrorKind::truncation:
    case ErrorKind::rank_collapse: return 2;
    default: return 1;
  }
}

void report(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

json execute(const json& spec) {
  const json s = normalize(spec);
  const ContourConfig cfg = contour_from(s["contour"]);
  json config = config_json();
  config["jobs"] = max_jobs();
  const json result = kRunners.at(s["command"].get<std::string>())(s, cfg);
  return {{"command", s["command"]}, {"spec", s}, {"config", config}, {"result", result}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unified-transform heat equation solver and controllability diagnostics", "utm-heat"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  struct Flags {
    std::string spec, u0, g, h, g_tangential, u0_tangential, x, lambda, scan, manufactured, k, K_scan, output, format,
        basis, lambda_t, interval_u0;
    double T = 0, L = 0, t = 0, theta = 0, lambda_max = 0, indent = 0, mu = 0, tolerance = 0, bound = 0, x_max = 0,
           interval_T = 0;
    int panels = 0, K = 0, collocation = 0, nx = 0, nt = 0, jobs = 0;
  } f;

  std::map<std::string, CLI::App*> subs;
  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, kAbout.at(name));
    sub->add_option("--spec", f.spec, "problem document (JSON), or an output file to rerun");
    sub->add_option("--output,-o", f.output, "output path (default: stdout)");
    sub->add_option("--format", f.format, "json, csv or jsonl")->check(CLI::IsMember({"json", "csv", "jsonl"}));
    sub->add_option("--T", f.T, "horizon");
    sub->add_option("--theta", f.theta, "contour leg angle");
    sub->add_option("--lambda-max", f.lambda_max, "contour truncation radius");
    sub->add_option("--panels", f.panels, "geometric panels per contour leg");
    sub->add_option("--indent", f.indent, "indentation radius at the origin");
    sub->add_option("--jobs", f.jobs, "worker threads (default: UTM_HEAT_JOBS or 1)");
    subs[name] = sub;
  }
  auto opt = [&](const std::string& cmd, const std::string& flag, auto& var, const std::string& help) {
    subs[cmd]->add_option(flag, var, help);
  };
  for (const auto* cmd : {"solve-halfline", "solve-interval", "certify", "synthesize", "attempt-halfline", "dichotomy",
                          "oracle-compare"})
    opt(cmd, "--u0", f.u0, "initial datum, e.g. exp_decay:a=1");
  for (const auto* cmd : {"solve-halfline", "growth-test", "oracle-compare"}) opt(cmd, "--g", f.g, "boundary datum, e.g. const:1");
  for (const auto* cmd : {"solve-interval", "oracle-compare"}) opt(cmd, "--h", f.h, "right boundary datum");
  for (const auto* cmd : {"solve-interval", "synthesize", "oracle-compare", "dichotomy"}) opt(cmd, "--L", f.L, "interval length");
  for (const auto* cmd : {"solve-halfline", "solve-interval", "oracle-compare"}) opt(cmd, "--x", f.x, "points: a,b,c or lo:hi:n");
  opt("solve-halfline", "--t", f.t, "evaluation time (default T)");
  opt("check-gr", "--t", f.t, "snapshot time (default T)");
  opt("check-gr", "--manufactured", f.manufactured, "exp:a=1 (half line) or sine:n=1 (interval)");
  opt("check-gr", "--lambda", f.lambda, "re,im[;re,im...]");
  opt("check-gr", "--L", f.L, "interval length (sine family)");
  opt("certify", "--scan", f.scan, "lo:hi:count[:log|linear]");
  opt("certify", "--tolerance", f.tolerance, "verdict threshold on the gap");
  opt("halfspace-certify", "--scan", f.scan, "normal scan lo:hi:count[:log|linear]");
  opt("halfspace-certify", "--u0", f.u0, "normal factor of u0");
  opt("halfspace-certify", "--u0-tangential", f.u0_tangential, "tangential factor of u0, e.g. gaussian:w=1");
  opt("halfspace-certify", "--g", f.g, "time factor of g");
  opt("halfspace-certify", "--g-tangential", f.g_tangential, "tangential factor of g");
  opt("halfspace-certify", "--lambda-t", f.lambda_t, "tangential frequencies");
  opt("growth-test", "--k", f.k, "λ² grid: a,b,c or lo:hi:n");
  opt("growth-test", "--bound", f.bound, "bound M for the bounded flag");
  for (const auto* cmd : {"synthesize", "dichotomy"}) {
    opt(cmd, "--K", f.K, "basis size");
  }
  for (const auto* cmd : {"synthesize", "attempt-halfline", "dichotomy"}) {
    opt(cmd, "--mu", f.mu, "absolute Tikhonov weight");
    opt(cmd, "--basis", f.basis, "legendre, piecewise_constant or sine");
  }
  opt("synthesize", "--collocation", f.collocation, "number of Chebyshev collocation points");
  for (const auto* cmd : {"attempt-halfline", "dichotomy"}) opt(cmd, "--K-scan", f.K_scan, "basis sizes, e.g. 2,4,8,16");
  opt("dichotomy", "--interval-u0", f.interval_u0, "interval initial datum");
  opt("dichotomy", "--interval-T", f.interval_T, "interval horizon");
  opt("oracle-compare", "--nx", f.nx, "Crank–Nicolson intervals in x");
  opt("oracle-compare", "--nt", f.nt, "Crank–Nicolson time steps");
  opt("oracle-compare", "--x-max", f.x_max, "half-line truncation point");
  opt("oracle-compare", "--problem", f.manufactured, "half_line or interval");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "validation", e.what());
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string cmd = sub->get_name();
    auto given = [&](const std::string& flag) {
      const CLI::Option* o = sub->get_option_no_throw(flag);
      return o && o->count() > 0;
    };

    json spec = given("--spec") ? load_spec(f.spec) : json::object();
    if (spec.contains("command") && spec["command"] != cmd)
      fail(ErrorKind::validation, "spec command '" + spec["command"].get<std::string>() + "' does not match " + cmd);
    spec["command"] = cmd;
    auto param = [&](const std::string& key, json v) {
      if (!spec.contains("params")) spec["params"] = json::object();
      spec["params"][key] = std::move(v);
    };

    if (given("--T")) spec["T"] = f.T;
    if (given("--L")) spec["L"] = f.L;
    if (cmd == "halfspace-certify") {
      if (given("--u0") || given("--u0-tangential")) {
        if (!given("--u0") || !given("--u0-tangential"))
          fail(ErrorKind::validation, "half-space u0 needs --u0 and --u0-tangential");
        spec["u0"] = {{"tangential", parse_entry(f.u0_tangential, "--u0-tangential")}, {"normal", parse_entry(f.u0, "--u0")}};
      }
      if (given("--g-tangential"))
        spec["g"] = {{"tangential", parse_entry(f.g_tangential, "--g-tangential")},
                     {"time", given("--g") ? parse_entry(f.g, "--g") : json{{"id", "zero"}}}};
      if (given("--lambda-t")) param("lambda_t", parse_list(f.lambda_t, "--lambda-t"));
    } else {
      if (given("--u0")) spec["u0"] = parse_entry(f.u0, "--u0");
      if (given("--g")) spec["g"] = parse_entry(f.g, "--g");
    }
    if (given("--h")) spec["h"] = parse_entry(f.h, "--h");
    if (given("--x")) param("x", parse_list(f.x, "--x"));
    if (given("--t")) param("t", f.t);
    if (given("--scan")) param("scan", parse_scan(f.scan));
    if (given("--tolerance")) param("tolerance", f.tolerance);
    if (given("--k")) param("k", parse_list(f.k, "--k"));
    if (given("--bound")) param("bound", f.bound);
    if (given("--K")) param("K", f.K);
    if (given("--mu")) param("mu", f.mu);
    if (given("--basis")) param("basis", f.basis);
    if (given("--collocation")) param("collocation", f.collocation);
    if (given("--K-scan")) {
      json ks = json::array();
      for (double v : parse_list(f.K_scan, "--K-scan")) ks.push_back(static_cast<int>(v));
      param("K_scan", ks);
    }
    if (given("--interval-u0")) param("interval_u0", parse_entry(f.interval_u0, "--interval-u0"));
    if (given("--interval-T")) param("interval_T", f.interval_T);
    if (given("--nx")) param("nx", f.nx);
    if (given("--nt")) param("nt", f.nt);
    if (given("--x-max")) param("x_max", f.x_max);
    if (cmd == "oracle-compare" && given("--problem")) spec["problem"] = f.manufactured;
    if (cmd == "check-gr") {
      if (given("--manufactured")) {
        const json e = parse_entry(f.manufactured, "--manufactured");
        const std::string family = e.value("id", "");
        param("family", family);
        for (const auto& [k, v] : e["params"].items()) {
          if (k == "a" || k == "n") param(k, k == "n" ? json(static_cast<int>(v.get<double>())) : v);
          else if (k == "L") spec["L"] = v;
          else fail(ErrorKind::validation, "unknown manufactured parameter '" + k + "'");
        }
        if (family == "sine") spec["problem"] = "interval";
      }
      if (given("--lambda")) param("lambda", parse_lambdas(f.lambda));
    }

    json contour = spec.value("contour", json::object());
    if (given("--theta")) contour["theta"] = f.theta;
    if (given("--lambda-max")) contour["lambda_max"] = f.lambda_max;
    if (given("--panels")) contour["panels"] = f.panels;
    if (given("--indent")) contour["indent"] = f.indent;
    if (!contour.empty()) spec["contour"] = contour;

    json output = spec.value("output", json::object());
    if (given("--output")) output["path"] = f.output;
    else if (given("--spec")) output["path"] = nullptr;
    if (given("--format")) output["format"] = f.format;
    if (!output.empty()) spec["output"] = output;

    if (given("--jobs")) {
      require(f.jobs >= 1, "--jobs must be at least 1");
      set_max_jobs(f.jobs);
    }
    const json doc = execute(spec);
    set_max_jobs(0);
    emit(doc, out);
    return 0;
  } catch (const Error& e) {
    set_max_jobs(0);
    report(err, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    set_max_jobs(0);
    report(err, "validation", e.what());
    return 1;
  } catch (const std::exception& e) {
    set_max_jobs(0);
    report(err, "internal", e.what());
    return 2;
  }
}

}  // namespace utm::cli
