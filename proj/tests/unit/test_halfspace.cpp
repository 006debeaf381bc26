#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "utm/halfspace.hpp"
#include "utm/transforms.hpp"

using namespace utm;
using std::numbers::pi;

namespace {
const cplx I{0.0, 1.0};
Profile hl(const std::string& id, Params p = {}) { return Profile::closed_form(Domain::half_line(), id, p); }

std::vector<double> scan() { return ScanGrid{}.points(); }
}  // namespace

TEST_CASE("tangential transforms against quadrature") {
  const Tangential fs[] = {Tangential::closed_form("gaussian", {{"w", 0.8}, {"amp", 1.5}}),
                           Tangential::closed_form("two_sided_exp", {{"c", 2.0}})};
  for (const auto& a : fs)
    for (double l : {0.0, 0.7, -2.0}) {
      const cplx q = ref::simpson_extrapolated([&](double x) { return std::exp(-I * l * x) * a(x); }, -40, 40, 40000);
      CHECK(std::abs(a.transform(l) - q) < 1e-9);
    }
  const Tangential w = Tangential::closed_form("plane_wave", {{"alpha", 0.5}});
  CHECK(w.transform(0.5) == cplx{1.0, 0.0});
  CHECK(w.transform(-0.5) == cplx{0.0, 0.0});
  CHECK_THROWS_AS(Tangential::closed_form("box"), Error);
  CHECK_THROWS_AS(Tangential::closed_form("gaussian", {{"c", 1}}), Error);
}

TEST_CASE("half-space global relation for the manufactured plane wave") {
  for (double a : {0.0, 0.5, 2.0})
    for (double b : {0.5, 1.0}) {
      const double T = 1.0;
      const HalfSpaceProblem2D p = manufactured_plane_wave(a, b, T);
      const SeparableSignal h = manufactured_plane_wave_trace(a, b, T);
      for (double t : {0.25, 1.0})
        for (cplx ln : {cplx(2.0, -1.0), cplx(-0.5, -0.3), cplx(1.0, 0.0)}) {
          const HalfSpaceField ut = manufactured_plane_wave_snapshot(a, b, t);
          CHECK(halfspace_global_relation_residual(p, h, ut, a, ln, t).magnitude() < 1e-10);
        }
    }
}

TEST_CASE("half-space global relation: zero data and perturbed trace") {
  const Tangential g0 = Tangential::closed_form("gaussian");
  const HalfSpaceProblem2D z(HalfSpaceField::separable(g0, hl("zero")), SeparableSignal{g0, TimeSignal::zero(1.0)}, 1.0,
                             {-1.0, 0.0, 1.0});
  const HalfSpaceField zf = HalfSpaceField::separable(g0, hl("zero"));
  CHECK(halfspace_global_relation_residual(z, SeparableSignal{g0, TimeSignal::zero(1.0)}, zf, 0.5, {1.0, -1.0}, 0.5)
            .value.is_zero());

  const double a = 0.5, b = 1.0, T = 1.0, t = 0.8;
  const HalfSpaceProblem2D p = manufactured_plane_wave(a, b, T);
  const SeparableSignal exact = manufactured_plane_wave_trace(a, b, T);
  const SeparableSignal pert{exact.a, TimeSignal::closed_form(T, "exp", {{"c", -b + 0.05}, {"b", b * b - a * a}})};
  const cplx ln{1.5, -0.5};
  const cplx got = halfspace_global_relation_residual(p, pert, manufactured_plane_wave_snapshot(a, b, t), a, ln, t)
                       .value.value();
  const cplx k = a * a + ln * ln;
  const cplx expect = 0.05 * (std::exp((k + b * b - a * a) * t) - 1.0) / (k + b * b - a * a);
  CHECK(std::abs(got - expect) < 1e-10 * std::abs(expect));
}

TEST_CASE("tangential grid must be symmetric") {
  const HalfSpaceProblem2D p = manufactured_plane_wave(0.5, 1.0, 1.0);
  CHECK_THROWS_AS(HalfSpaceProblem2D(p.u0, p.g, 1.0, {0.0, 0.5}), Error);
}

TEST_CASE("zero datum: every slice inconclusive") {
  const HalfSpaceField u0 = HalfSpaceField::separable(Tangential::closed_form("gaussian"), hl("zero"));
  const std::vector<double> lt{-1.0, 0.0, 1.0};
  const auto s = scan();
  const HalfSpaceCertificate c = halfspace_obstruction_certificate(u0, lt, s);
  CHECK(c.verdict == Verdict::inconclusive);
  for (const auto& slice : c.slices) CHECK(slice.report.verdict == Verdict::inconclusive);
}

TEST_CASE("property: separable factorization") {
  const std::vector<double> lt{-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto s = scan();
  for (const auto& b : {hl("exp_decay", {{"a", 1}}), hl("indicator", {{"b", 1.5}}), hl("gaussian_bump", {{"c", 1}, {"w", 0.5}})}) {
    const CertificateReport one = obstruction_certificate(b, s);
    for (const auto& a : {Tangential::closed_form("gaussian", {{"w", 1.3}}), Tangential::closed_form("two_sided_exp", {{"c", 0.7}})}) {
      const HalfSpaceCertificate c = halfspace_obstruction_certificate(HalfSpaceField::separable(a, b), lt, s);
      CHECK(c.verdict == Verdict::obstructed);
      for (const auto& slice : c.slices) {
        const double w = std::abs(a.transform(slice.lambda_t));
        CHECK(std::abs(slice.report.gap - w * one.gap) < 1e-10);
        CHECK(std::abs(slice.report.M - w * one.M) < 1e-10);
      }
    }
  }
}

TEST_CASE("property: unit-mass slice at zero reproduces the 1-D certificate") {
  const Tangential a = Tangential::closed_form("gaussian", {{"w", 1.0 / std::sqrt(pi)}});
  CHECK(std::abs(a.transform(0.0) - 1.0) < 1e-15);
  const Profile b = hl("exp_decay", {{"a", 1}});
  const auto s = scan();
  const std::vector<double> lt{0.0};
  const HalfSpaceCertificate c = halfspace_obstruction_certificate(HalfSpaceField::separable(a, b), lt, s);
  const CertificateReport one = obstruction_certificate(b, s);
  CHECK(c.slices[0].report.gap == doctest::Approx(one.gap).epsilon(1e-15));
  CHECK(c.slices[0].report.M == doctest::Approx(one.M).epsilon(1e-15));
  CHECK(c.slices[0].report.lambda_star == doctest::Approx(one.lambda_star).epsilon(1e-12));
}

TEST_CASE("sampled fields are flagged and agree with the separable form") {
  SampledField f;
  for (int i = -400; i <= 400; ++i) f.tangential_grid.push_back(0.02 * i);
  for (int j = 0; j <= 600; ++j) f.normal_grid.push_back(0.02 * j);
  for (double x : f.tangential_grid)
    for (double y : f.normal_grid) f.values.push_back(std::exp(-x * x) * std::exp(-y));
  f.normal_decay = 1.0;
  const HalfSpaceField s = HalfSpaceField::sampled(f);
  const HalfSpaceField e = HalfSpaceField::separable(Tangential::closed_form("gaussian"), hl("exp_decay", {{"a", 1}}));
  for (double lt : {0.0, 1.0})
    for (cplx ln : {cplx(0.5, 0.0), cplx(2.0, -0.5)}) CHECK(std::abs(s.transform(lt, ln) - e.transform(lt, ln)) < 1e-3);
  const std::vector<double> lt{0.0};
  const std::vector<double> normal{0.5, 1.0, 2.0};
  const HalfSpaceCertificate c = halfspace_obstruction_certificate(s, lt, normal);
  CHECK(c.reduced_accuracy);
  CHECK(c.verdict == Verdict::obstructed);
}

TEST_CASE("growth diagnostic per slice") {
  const Tangential a = Tangential::closed_form("gaussian");
  const SeparableSignal g{a, TimeSignal::closed_form(1.0, "const", {{"c", 2}})};
  const std::vector<double> lt{-1.0, 1.0};
  const auto s = scan();
  const HalfSpaceCertificate c =
      halfspace_obstruction_certificate(HalfSpaceField::separable(a, hl("exp_decay", {{"a", 1}})), lt, s, &g, 1.0);
  for (const auto& slice : c.slices) {
    REQUIRE(slice.F.has_value());
    CHECK(std::abs(slice.F->value() - std::exp(1.0) * a.transform(slice.lambda_t) * 2.0) < 1e-12);
  }
}
