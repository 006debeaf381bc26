#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "utm/interval.hpp"
#include "utm/oracle.hpp"
#include "utm/transforms.hpp"

using namespace utm;
using std::numbers::pi;

namespace {
const cplx I{0.0, 1.0};

Profile iv(const std::string& id, Params p = {}, double L = 1.0) {
  return Profile::closed_form(Domain::interval(L), id, p);
}

std::vector<double> interior(int n, double L = 1.0) {
  std::vector<double> x;
  for (int i = 1; i < n; ++i) x.push_back(L * i / n);
  return x;
}

// x(L − x) as a polynomial profile.
Profile parabola(double L = 1.0) { return iv("poly_exp", {{"a", 0}, {"c1", L}, {"c2", -1}}, L); }
}  // namespace

TEST_CASE("interval global relation: sine mode") {
  for (double L : {1.0, 2.0}) {
    const double T = 0.5, k = pi / L, decay = std::exp(-k * k * T);
    const IntervalProblem p(iv("sine_mode", {{"n", 1}}, L), TimeSignal::zero(T), T);
    const TimeSignal g1 = TimeSignal::closed_form(T, "exp", {{"c", k}, {"b", -k * k}});
    const TimeSignal h1 = TimeSignal::closed_form(T, "exp", {{"c", -k}, {"b", -k * k}});
    const Profile uT = iv("sine_mode", {{"n", 1}, {"amp", decay}}, L);
    for (cplx l : {cplx(2.0, -1.0), cplx(0.5, 3.0), cplx(-4.0, 0.2), cplx(0.0, 0.0), cplx(k, 0.0)})
      CHECK(interval_global_relation_residual(p, g1, h1, uT, l).magnitude() < 1e-10);

    // Scaling h̃₁ by 1.01 leaves 0.01·e^{−iλL}h̃₁ behind.
    const TimeSignal h1b = TimeSignal::closed_form(T, "exp", {{"c", -1.01 * k}, {"b", -k * k}});
    const cplx l{1.5, -0.5};
    const cplx got = interval_global_relation_residual(p, g1, h1b, uT, l).value.value();
    const cplx expect = 0.01 * std::exp(-I * l * L) * t_transform(h1, l * l, T);
    CHECK(std::abs(got - expect) < 1e-12 * std::abs(expect));
  }
}

TEST_CASE("interval global relation: zero data") {
  const IntervalProblem p(iv("zero"), TimeSignal::zero(1.0), 1.0);
  CHECK(interval_global_relation_residual(p, TimeSignal::zero(1.0), TimeSignal::zero(1.0), iv("zero"), {1.0, 2.0})
            .value.is_zero());
}

TEST_CASE("R: zero boundary datum, removable origin, direct formula") {
  const TimeSignal one = TimeSignal::closed_form(1.0, "const", {{"c", 1}});
  CHECK(evaluate_R({0.7, 0.3}, 0.5, 1.0, 1.0, TimeSignal::zero(1.0)) == cplx{0.0, 0.0});
  CHECK(std::abs(evaluate_R(0.0, 0.5, 1.0, 1.0, one) - 1.0 / (2 * pi)) < 1e-15);
  // Direct formula, evaluated here independently of the library.
  auto direct = [&](cplx l, double x) {
    const cplx k = l * l;
    const cplx ht = (std::exp(k) - 1.0) / k;
    return (I / pi) * l * std::exp(I * l * x - k) / (std::exp(I * l) - std::exp(-I * l)) * ht;
  };
  const cplx small = 1e-4 * std::polar(1.0, pi / 8);
  CHECK(std::abs(evaluate_R(small, 0.0, 1.0, 1.0, one) - direct(small, 0.0)) < 1e-8);
  const cplx l = std::polar(1.0, pi / 8);
  CHECK(std::abs(evaluate_R(l, 0.5, 1.0, 1.0, one) - direct(l, 0.5)) < 1e-12 * std::abs(direct(l, 0.5)));
}

TEST_CASE("R: pole proximity") {
  const TimeSignal one = TimeSignal::closed_form(1.0, "const", {{"c", 1}});
  try {
    evaluate_R({pi + 1e-9, 0.0}, 0.5, 1.0, 1.0, one);
    FAIL("expected a pole-proximity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole_proximity);
  }
  CHECK_NOTHROW(evaluate_R({pi + 1e-6, 0.0}, 0.5, 1.0, 1.0, one));
}

TEST_CASE("property: removability of R and the known-term integrands") {
  // The functions have O(1) slope at 0, so the value at λ = 1e-4 is compared
  // with the linear interpolant through λ = 0 (series branch) and λ = 1e-3
  // (direct branch). Cancellation in either branch would show up here.
  const TimeSignal one = TimeSignal::closed_form(1.0, "const", {{"c", 1}});
  const Profile u0 = parabola();
  const cplx dir = std::polar(1.0, pi / 8);
  auto check = [&](auto f) {
    for (double sign : {1.0, -1.0}) {
      const cplx f0 = f(cplx{0.0, 0.0}), f1 = f(sign * 1e-3 * dir), fs = f(sign * 1e-4 * dir);
      CHECK(std::abs(fs - (f0 + 0.1 * (f1 - f0))) < 1e-6);
      CHECK(std::abs(fs - f0) < 1e-3);
    }
  };
  check([&](cplx l) { return evaluate_R(l, 0.4, 1.0, 1.0, one); });
  check([&](cplx l) { return u0_integrand_plus(l, 0.4, 0.5, u0); });
  check([&](cplx l) { return u0_integrand_minus(l, 0.4, 0.5, u0); });
}

TEST_CASE("known term: zero datum and separated sine mode") {
  for (double x : {0.2, 0.5}) CHECK(evaluate_U0(x, 0.3, iv("zero")) == 0.0);
  const auto xs = interior(8);
  const auto u = evaluate_U0_profile(xs, 0.5, iv("sine_mode", {{"n", 1}}));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(u[i].value - std::exp(-pi * pi / 2) * std::sin(pi * xs[i])) < 1e-12);
    CHECK(std::abs(u[i].imag) < 1e-8);
  }
}

TEST_CASE("terminal profile against Crank-Nicolson: parabola") {
  const IntervalProblem p(parabola(), TimeSignal::zero(0.1), 0.1);
  const auto xs = interior(10);
  const TerminalProfile tp = terminal_profile(p, xs);
  const GridSolution g = crank_nicolson_interval(p.u0, p.h, 1.0, 0.1, 400, 400);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(tp.values[i] - g.final_at(xs[i])) < 1e-4);
}

TEST_CASE("terminal profile with a boundary datum against Crank-Nicolson") {
  const double T = 0.5;
  const Profile u0s[] = {iv("zero"), iv("sine_mode", {{"n", 2}}), parabola()};
  const TimeSignal hs[] = {TimeSignal::closed_form(T, "const", {{"c", 1}}),
                           TimeSignal::closed_form(T, "sine", {{"c", 1}, {"w", 6}}),
                           TimeSignal::closed_form(T, "exp", {{"c", 0.5}, {"b", -1}})};
  const auto xs = interior(10);
  for (const auto& u0 : u0s)
    for (const auto& h : hs) {
      const TerminalProfile tp = terminal_profile(IntervalProblem(u0, h, T), xs);
      const GridSolution g = crank_nicolson_interval(u0, h, 1.0, T, 400, 800);
      for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(tp.values[i] - g.final_at(xs[i])) < 1e-3);
    }
}

TEST_CASE("property: linearity in the data") {
  const double T = 0.3;
  const Profile u0 = iv("gaussian_bump", {{"c", 0.4}, {"w", 0.2}});
  const TimeSignal h = TimeSignal::closed_form(T, "sine", {{"c", 2}, {"w", 3}});
  const auto xs = interior(7);
  const auto both = terminal_profile(IntervalProblem(u0, h, T), xs).values;
  const auto first = terminal_profile(IntervalProblem(u0, TimeSignal::zero(T), T), xs).values;
  const auto second = terminal_profile(IntervalProblem(iv("zero"), h, T), xs).values;
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(both[i] - first[i] - second[i]) < 1e-10);
}

TEST_CASE("property: contour nodes clear the pole set") {
  for (double L : {0.5, 1.0, 3.0}) {
    const auto xs = interior(5, L);
    const TerminalProfile tp = terminal_profile(
        IntervalProblem(iv("sine_mode", {{"n", 1}}, L), TimeSignal::closed_form(0.4, "const", {{"c", 1}}), 0.4), xs);
    CHECK(tp.indent == doctest::Approx(std::min(0.1, pi / (4 * L))));
    const Contour c = build_contour(ContourKind::d_plus, kDefaultTheta, 20.0, kDefaultPanels, tp.indent);
    CHECK(pole_clearance(c, L) >= 1e-3);
  }
}

TEST_CASE("property: deformation invariance of the interval representation") {
  const double T = 0.25;
  const IntervalProblem p(parabola(), TimeSignal::closed_form(T, "sine", {{"c", 1}, {"w", 5}}), T);
  const std::vector<double> xs{0.25, 0.5, 0.75};
  std::vector<double> ref_values;
  for (double theta : {pi / 8, pi / 6, pi / 5}) {
    ContourConfig cfg;
    cfg.theta = theta;
    const auto v = terminal_profile(p, xs, cfg).values;
    if (ref_values.empty()) ref_values = v;
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(v[i] - ref_values[i]) < 1e-8);
  }
}

TEST_CASE("response matrix matches terminal profiles of basis controls") {
  const double T = 0.5;
  const auto xs = interior(4);
  const int K = 3;
  const auto A = control_response_matrix(xs, T, 1.0, BasisKind::legendre, K);
  for (int k = 0; k < K; ++k) {
    std::vector<double> c(K, 0.0);
    c[k] = 1.0;
    const auto tp = terminal_profile(IntervalProblem(iv("zero"), TimeSignal::basis(T, BasisKind::legendre, c), T), xs);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(-A[i * K + k] - tp.values[i]) < 1e-12);
  }
}
