#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "reference.hpp"
#include "utm/contours.hpp"

using namespace utm;
using std::numbers::pi;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("node count without indentation") {
  const Contour c = build_contour(ContourKind::d_plus, pi / 8, 10.0, 8, 0.0);
  CHECK(c.size() == 256);
}

TEST_CASE("legs lie on the boundary rays at theta = pi/4") {
  const Contour c = build_contour(ContourKind::d_plus, pi / 4, 6.0, 4, 0.0);
  for (cplx z : c.nodes) {
    const double a = std::arg(z);
    const bool on_ray = std::abs(a - pi / 4) < 1e-12 || std::abs(a - 3 * pi / 4) < 1e-12;
    CHECK(on_ray);
    // Boundary of {Re λ² < 0}: Re λ² vanishes on both rays.
    CHECK(std::abs((z * z).real()) < 1e-12 * std::norm(z));
  }
}

TEST_CASE("deformed legs stay in the decay wedge") {
  const Contour c = build_contour(ContourKind::d_plus, pi / 8, 6.0, 4, 0.0);
  for (cplx z : c.nodes) {
    CHECK(z.imag() > 0.0);
    CHECK((z * z).real() > 0.0);
  }
}

TEST_CASE("property: reflection") {
  for (double rho : {0.0, 0.1}) {
    const Contour p = build_contour(ContourKind::d_plus, pi / 8, 7.0, 8, rho);
    const Contour m = build_contour(ContourKind::d_minus, pi / 8, 7.0, 8, rho);
    REQUIRE(p.size() == m.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
      CHECK(std::abs(m.nodes[j] - std::conj(p.nodes[j])) < 1e-15 * (1.0 + std::abs(p.nodes[j])));
      CHECK(std::abs(m.weights[j] + std::conj(p.weights[j])) < 1e-15 * (1.0 + std::abs(p.weights[j])));
    }
  }
}

TEST_CASE("indentation keeps nodes away from the origin") {
  const Contour c = build_contour(ContourKind::d_plus, pi / 8, 7.0, 8, 0.1);
  for (cplx z : c.nodes) CHECK(std::abs(z) >= 0.1 - 1e-14);
}

TEST_CASE("zero integrand integrates to zero") {
  const Contour c = build_contour(ContourKind::d_plus, pi / 8, 7.0, 8);
  CHECK(contour_integrate(c, [](cplx) { return cplx{0.0, 0.0}; }) == cplx{0.0, 0.0});
}

TEST_CASE("non-finite integrand values are reported with their lambda") {
  const Contour c = build_contour(ContourKind::d_plus, pi / 8, 7.0, 8);
  try {
    contour_integrate(c, [](cplx z) { return std::abs(z) > 3.0 ? cplx{std::numeric_limits<double>::quiet_NaN(), 0.0} : z; });
    FAIL("expected an accuracy error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::accuracy);
    CHECK(std::string(e.what()).find("λ = (") != std::string::npos);
  }
}

TEST_CASE("property: deformation invariance") {
  const double x = 1.0, T = 1.0;
  auto f = [&](cplx l) { return std::exp(-l * l * T) * l * std::exp(I * l * x) / (1.0 + l * l); };
  cplx first{};
  for (double theta : {pi / 8, pi / 6, pi / 5}) {
    const double lmax = gaussian_lambda_max(theta, T);
    const cplx v = contour_integrate(build_contour(ContourKind::d_plus, theta, lmax, 8), f);
    if (theta == pi / 8) first = v;
    CHECK(std::abs(v - first) < 1e-9);
  }
}

TEST_CASE("D+ integral against independent segment quadrature") {
  // ∫ e^{iλx−λ²t} û₀(−λ) dλ, u₀ = e^{−x}, x = t = 1.
  auto f = [](cplx l) { return std::exp(I * l - l * l) / (1.0 - I * l); };
  const double theta = pi / 8, lmax = 9.0;
  const cplx v = contour_integrate(build_contour(ContourKind::d_plus, theta, lmax, 12), f);
  const cplx a = lmax * std::polar(1.0, pi - theta), b = lmax * std::polar(1.0, theta);
  const cplx r = ref::segment(f, a, 0.0, 20000) + ref::segment(f, 0.0, b, 20000);
  CHECK(std::abs(v - r) < 1e-8);
}

TEST_CASE("property: truncation convergence") {
  auto f = [](cplx l) { return std::exp(I * l * 2.0 - l * l * 0.5) / (1.0 - I * l); };
  const double base = gaussian_lambda_max(pi / 8, 0.5);
  const cplx a = contour_integrate(build_contour(ContourKind::d_plus, pi / 8, base, 8), f);
  const cplx b = contour_integrate(build_contour(ContourKind::d_plus, pi / 8, 2 * base, 9), f);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("real line segment integrates a Gaussian") {
  const Contour c = build_real_line(10.0, 8);
  const cplx v = contour_integrate(c, [](cplx l) { return std::exp(-l * l); });
  CHECK(std::abs(v - std::sqrt(pi)) < 1e-13);
}

TEST_CASE("pole clearance") {
  const Contour c = build_contour(ContourKind::d_plus, pi / 8, 10.0, 8, 0.1);
  const double d = pole_clearance(c, 1.0);
  CHECK(d > 0.0);
  double brute = std::numeric_limits<double>::infinity();
  for (cplx z : c.nodes)
    for (int n = -5; n <= 5; ++n)
      if (n != 0) brute = std::min(brute, std::abs(z - n * pi));
  CHECK(d <= brute + 1e-15);
}

TEST_CASE("truncation radii") {
  const double g = gaussian_lambda_max(pi / 8, 1.0);
  CHECK(std::exp(-g * g * std::cos(pi / 4)) < 1e-16);
  const double e = exponential_lambda_max(pi / 8, 2.0);
  CHECK(std::exp(-e * std::sin(pi / 8) * 2.0) < 1e-13);
}
