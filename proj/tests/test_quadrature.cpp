#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cuspext/errors.hpp"
#include "cuspext/quadrature.hpp"
#include "oracles.hpp"

using namespace cuspext;
using std::numbers::pi;

namespace {

DomainSpec square_cusp(int n = 3) { return DomainSpec::make(n, CuspProfile::power(1.0, 2.0)); }

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int order : {1, 2, 3, 5, 8, 12}) {
    const GaussRule g = gauss_legendre(order);
    CHECK(g.nodes.size() == static_cast<std::size_t>(order));
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
      double sum = 0.0;
      for (int i = 0; i < order; ++i) sum += g.weights[i] * std::pow(g.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CAPTURE(order);
      CAPTURE(deg);
      CHECK(std::abs(sum - exact) <= 1e-12);
    }
    for (double w : g.weights) CHECK(w > 0.0);
  }
  CHECK_THROWS_AS(gauss_legendre(0), ArgumentError);
}

TEST_CASE("cylinder integrals of t-polynomials are exact") {
  const QuadratureScheme scheme;
  const auto region = IntegrationRegion::cylinder(3, 1.0, 2.0, 0.5);
  for (int deg = 0; deg <= 15; ++deg) {
    const double got = integrate(region, scheme, [deg](const DomainPoint& z) { return std::pow(z.t, deg); }).value;
    const double exact = pi * 0.25 * (std::pow(2.0, deg + 1) - 1.0) / (deg + 1);
    CAPTURE(deg);
    CHECK(std::abs(got - exact) <= 1e-12 * exact);
  }
}

TEST_CASE("domain volumes in dimensions 2, 3 and 4") {
  const QuadratureScheme scheme;
  const auto one = test_function("constant");
  CHECK(lp_norm(one, IntegrationRegion::domain(square_cusp(3)), 1.0, scheme) ==
        doctest::Approx(6.0 * pi / 5.0).epsilon(1e-10));
  CHECK(lp_norm(one, IntegrationRegion::domain(square_cusp(2)), 1.0, scheme) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-10));
  CHECK(lp_norm(one, IntegrationRegion::domain(square_cusp(4)), 1.0, scheme) ==
        doctest::Approx(4.0 / 3.0 * pi * 8.0 / 7.0).epsilon(1e-10));
  // step profile: 0.5 pi 0.1^2 + 0.5 pi 0.3^2 + pi 0.3^2
  const auto step = DomainSpec::make(3, CuspProfile::step({0.5, 1.0}, {0.1, 0.3}));
  CHECK(lp_norm(one, IntegrationRegion::domain(step), 1.0, scheme) ==
        doctest::Approx(pi * (0.005 + 0.045 + 0.09)).epsilon(1e-10));
}

TEST_CASE("volume of a general profile agrees with Simpson") {
  const auto spec = DomainSpec::make(3, CuspProfile::power(0.3, 1.7));
  const double cusp = oracle::simpson([](double t) { return pi * std::pow(0.3 * std::pow(t, 1.7), 2); }, 0.0, 1.0, 20000);
  const double expected = cusp + pi * 0.09;
  const double got = lp_norm(test_function("constant"), IntegrationRegion::domain(spec), 1.0, QuadratureScheme{});
  CHECK(got == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("L2 norm of t on the cylinder part") {
  const double c = 0.25;
  const double got = lp_norm(test_function("coordinate_t"), IntegrationRegion::cylinder(3, 1.0, 2.0, c), 2.0, QuadratureScheme{});
  CHECK(got == doctest::Approx(std::sqrt(7.0 * pi * c * c / 3.0)).epsilon(1e-12));
}

TEST_CASE("Sobolev norms of simple fields") {
  const QuadratureScheme scheme;
  const auto region = IntegrationRegion::domain(square_cusp());
  const SobolevNorm tn = w1p_norm_detail(test_function("coordinate_t"), region, 1.0, scheme);
  CHECK(tn.lp == doctest::Approx(pi / 6.0 + 1.5 * pi).epsilon(1e-10));
  CHECK(tn.gradient_lp == doctest::Approx(6.0 * pi / 5.0).epsilon(1e-10));
  CHECK(tn.total == doctest::Approx(pi / 6.0 + 1.5 * pi + 6.0 * pi / 5.0).epsilon(1e-10));
  CHECK(w1p_norm(test_function("constant"), region, 1.0, scheme) == doctest::Approx(6.0 * pi / 5.0));
  CHECK(w1p_norm(zero_field(), region, 2.0, scheme) == 0.0);
  CHECK_THROWS_AS(lp_norm(test_function("constant"), region, 0.5, scheme), ArgumentError);
}

TEST_CASE("gradients: analytic, finite-difference and seam handling") {
  const QuadratureScheme scheme;
  const auto t = test_function("coordinate_t");
  auto g = gradient(t, {0.5, {0.1, 0.2}}, scheme);
  CHECK(g == std::vector<double>{1.0, 0.0, 0.0});
  ScalarField sq = test_function("radius_squared");
  sq.gradient = {};
  g = gradient(sq, {0.5, {0.1, 0.2}}, scheme);
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(g[2] == doctest::Approx(0.4).epsilon(1e-6));

  ScalarField kink;
  kink.name = "kink";
  kink.value = [](const DomainPoint& z) { return std::abs(z.t - 1.0); };
  kink.smoothness = Smoothness::Piecewise;
  kink.piece = [](const DomainPoint& z) { return z.t < 1.0 ? 0 : 1; };
  kink.seam_distance = [](const DomainPoint& z) { return std::abs(z.t - 1.0); };
  CHECK(gradient(kink, {1.0 + 1e-9, {0.0, 0.0}}, scheme)[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gradient(kink, {1.0 - 1e-9, {0.0, 0.0}}, scheme)[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_THROWS_AS(gradient(kink, {1.0, {0.0, 0.0}}, scheme), DomainError);
}

TEST_CASE("analytic and finite-difference gradients agree for the field library") {
  const QuadratureScheme scheme;
  Rng rng(21);
  for (const auto& name : test_function_names()) {
    const auto u = test_function(name);
    ScalarField fd = u;
    fd.gradient = {};
    for (int k = 0; k < 1000; ++k) {
      const DomainPoint z{uniform(rng, 0.05, 1.95), random_in_ball(rng, 2, 0.5)};
      const auto a = gradient(u, z, scheme);
      const auto b = gradient(fd, z, scheme);
      double norm = 0.0, diff = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        norm = std::max(norm, std::abs(a[i]));
        diff = std::max(diff, std::abs(a[i] - b[i]));
      }
      CAPTURE(name);
      CHECK(diff <= 1e-5 * std::max(1.0, norm));
    }
  }
}

TEST_CASE("slice measures add up to the cross sections") {
  const auto region = IntegrationRegion::domain(square_cusp());
  const Integral vol = integrate(region, QuadratureScheme{}, [](const DomainPoint&) { return 1.0; }, true);
  REQUIRE_FALSE(vol.slices.empty());
  double total = 0.0;
  for (const auto& s : vol.slices) {
    CHECK(s.measure > 0.0);
    CHECK(std::abs(s.value - s.measure) <= 1e-10 * s.measure);
    total += s.measure;
  }
  CHECK(total == doctest::Approx(6.0 * pi / 5.0).epsilon(1e-10));
  std::ostringstream csv;
  write_slice_csv(csv, vol.slices);
  CHECK(csv.str().rfind("piece,t,measure,value\n", 0) == 0);
}

TEST_CASE("Hoelder inequality holds for computed norms") {
  const QuadratureScheme scheme;
  const auto region = IntegrationRegion::domain(square_cusp());
  const double vol = lp_norm(test_function("constant"), region, 1.0, scheme);
  for (const auto& name : test_function_names()) {
    const auto u = test_function(name);
    for (auto [p, q] : {std::pair{2.0, 1.0}, {4.0, 2.0}, {3.0, 3.0}, {5.0, 1.5}}) {
      CAPTURE(name);
      CHECK(lp_norm(u, region, q, scheme) <=
            std::pow(vol, 1.0 / q - 1.0 / p) * lp_norm(u, region, p, scheme) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("one refinement changes norms by less than one percent") {
  const QuadratureScheme coarse;
  const QuadratureScheme fine = coarse.refined();
  CHECK(fine.refinement_level() == 1);
  CHECK(fine.describe() != coarse.describe());
  const auto region = IntegrationRegion::domain(square_cusp());
  for (const auto& name : test_function_names()) {
    const auto u = test_function(name);
    for (double p : {1.0, 2.0}) {
      const double a = lp_norm(u, region, p, coarse), b = lp_norm(u, region, p, fine);
      CAPTURE(name);
      CHECK(std::abs(a - b) < 0.01 * b);
    }
  }
}

TEST_CASE("non-finite samples raise a numeric error") {
  const auto region = IntegrationRegion::domain(square_cusp());
  CHECK_THROWS_AS(integrate(region, QuadratureScheme{}, [](const DomainPoint&) { return std::numeric_limits<double>::quiet_NaN(); }),
                  NumericError);
  CHECK_THROWS_AS(integrate(region, QuadratureScheme{}, [](const DomainPoint& z) { return 1.0 / (z.t - z.t); }), NumericError);
}

TEST_CASE("invalid quadrature options are rejected") {
  CHECK_THROWS_AS(QuadratureScheme({.grading_ratio = 1.5}), ConfigError);
  CHECK_THROWS_AS(QuadratureScheme({.t_order = 0}), ConfigError);
  CHECK_THROWS_AS(IntegrationRegion::cylinder(3, 2.0, 1.0, 0.5), ArgumentError);
}

TEST_CASE("summation order makes integrals reproducible") {
  const auto spec = DomainSpec::make(4, CuspProfile::power(0.25, 3.0));
  const auto region = IntegrationRegion::domain(spec);
  const auto u = test_function("sin_cos");
  CHECK(lp_norm(u, region, 2.0, QuadratureScheme{}) == lp_norm(u, region, 2.0, QuadratureScheme{}));
}

TEST_CASE("extension ratio for the constant field") {
  const auto spec = DomainSpec::make(3, CuspProfile::power(0.25, 2.0));
  const NormReport r = extension_ratio(test_function("constant"), spec, 2.0, 1.0, QuadratureScheme{});
  REQUIRE(r.ratio.has_value());
  CHECK(std::isfinite(*r.ratio));
  CHECK(*r.ratio > 0.0);
  CHECK(*r.refinement_delta < 0.05);
  CHECK(*r.ratio == doctest::Approx(r.norm_Eu_W1q / r.norm_u_W1p));
  CHECK_FALSE(r.zero_denominator);
  CHECK(r.nodes > 0);
}

TEST_CASE("extension ratio edge cases") {
  const auto spec = DomainSpec::make(3, CuspProfile::power(0.25, 2.0));
  const NormReport zero = extension_ratio(zero_field(), spec, 2.0, 1.0, QuadratureScheme{});
  CHECK(zero.zero_denominator);
  CHECK_FALSE(zero.ratio.has_value());
  CHECK_THROWS_AS(extension_ratio(test_function("constant"), spec, 1.0, 2.0, QuadratureScheme{}), ArgumentError);
  CHECK_THROWS_AS(extension_ratio(test_function("constant"),
                                  DomainSpec::make(3, CuspProfile::step({0.5, 1.0}, {0.05, 0.2})), 2.0, 1.0, QuadratureScheme{}),
                  ArgumentError);
}
