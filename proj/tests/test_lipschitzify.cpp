#include <doctest.h>

#include <cmath>

#include "cuspext/errors.hpp"
#include "cuspext/lipschitzify.hpp"
#include "cuspext/random.hpp"
#include "oracles.hpp"

using namespace cuspext;

TEST_CASE("hat of t^2 at 1/2 solves t + t^2 = 1") {
  const auto psi = CuspProfile::power(1.0, 2.0);
  CHECK(hat_psi(psi, 0.5) == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  const HatPair pair = solve_hat_pair(psi, 0.5);
  CHECK(pair.t_component == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));
  CHECK_FALSE(pair.on_jump);
  CHECK_FALSE(pair.radial_dominant());
}

TEST_CASE("hat agrees with an independent bisection for smooth profiles") {
  for (double s : {1.5, 2.0, 3.0}) {
    const auto psi = CuspProfile::power(0.7, s);
    const auto f = [s](double t) { return 0.7 * std::pow(t, s); };
    for (double th : {1e-6, 0.01, 0.2, 0.5, 0.9, 0.999}) {
      CAPTURE(s);
      CAPTURE(th);
      CHECK(std::abs(hat_psi(psi, th) - oracle::hat(f, th)) < 1e-12);
    }
  }
}

TEST_CASE("linear profile is its own lipschitzification") {
  const auto psi = CuspProfile::linear(0.3);
  for (double th : log_grid(1e-5, 0.99, 100)) CHECK(hat_psi(psi, th) == psi(th));
  CHECK(hat_psi(psi, 1.0) == psi(1.0));
  // same answer through the generic bisection path
  const auto wrapped = CuspProfile::custom("lin", [](double t) { return 0.3 * t; });
  for (double th : {0.01, 0.3, 0.77}) CHECK(std::abs(hat_psi(wrapped, th) - psi(th)) < 1e-14);
}

TEST_CASE("two-step profile gives slope 1 + psi(1) across the jump") {
  const auto psi = CuspProfile::step({0.5, 1.0}, {0.1, 0.3});
  // g(t) = t + psi(t) jumps from 0.6 to 0.8 at t = 0.5, i.e. t_hat in (0.6/1.3, 0.8/1.3)
  const double a = 0.6 / 1.3 + 1e-6, b = 0.8 / 1.3 - 1e-6;
  for (int i = 0; i <= 20; ++i) {
    const double th = a + (b - a) * i / 20.0;
    const HatPair pair = solve_hat_pair(psi, th);
    CHECK(pair.on_jump);
    CHECK(pair.t_component == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(hat_psi(psi, th) - (1.3 * th - 0.5)) < 1e-10);
  }
}

TEST_CASE("target inside a jump gap") {
  const auto psi = CuspProfile::step({0.5, 1.0}, {0.1, 0.2});
  const HatPair pair = solve_hat_pair(psi, 0.55);
  CHECK(pair.on_jump);
  CHECK(pair.t_component == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pair.r_component == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("hat keeps relative accuracy for very flat cusps") {
  const auto psi = CuspProfile::power(1.0, 3.0);
  for (double th : {1e-6, 1e-5, 1e-4}) {
    const double t = oracle::solve_sum([](double x) { return x * x * x; }, 2.0 * th);
    CHECK(hat_psi(psi, th) == doctest::Approx(t * t * t).epsilon(1e-12));
  }
}

TEST_CASE("jump at t = 0 is handled through the zero extension") {
  const auto psi = CuspProfile::step({0.5, 1.0}, {0.1, 0.3});
  const HatPair pair = solve_hat_pair(psi, 0.05);
  CHECK(pair.on_jump);
  CHECK(pair.t_component == 0.0);
  CHECK(hat_psi(psi, 0.05) == doctest::Approx(1.3 * 0.05));
}

TEST_CASE("hat solver domain errors") {
  const auto psi = CuspProfile::power(1.0, 2.0);
  CHECK_THROWS_AS(solve_hat_pair(psi, 0.0), DomainError);
  CHECK_THROWS_AS(solve_hat_pair(psi, 1.0), DomainError);
  CHECK_THROWS_AS(solve_hat_pair(psi, -0.1), DomainError);
  CHECK(hat_psi(psi, 1.0) == 1.0);
  CHECK_THROWS_AS(hat_psi(psi, 1.5), DomainError);
}

TEST_CASE("hat is Lipschitz with constant 1 + psi(1)") {
  const std::vector<CuspProfile> profiles{CuspProfile::power(1.0, 2.0), CuspProfile::power(1.0, 3.0),
                                          CuspProfile::step({0.3, 0.6, 1.0}, {0.05, 0.2, 0.4})};
  Rng rng(7);
  for (const auto& psi : profiles) {
    const double bound = 1.0 + psi.at_one();
    for (int k = 0; k < 2000; ++k) {
      const double a = uniform(rng, 1e-9, 1.0 - 1e-9), b = uniform(rng, 1e-9, 1.0 - 1e-9);
      CHECK(std::abs(hat_psi(psi, a) - hat_psi(psi, b)) <= bound * std::abs(a - b) + 2e-12);
    }
  }
}

TEST_CASE("lipschitzified profile matches pointwise hat and carries constants") {
  const auto psi = CuspProfile::power(1.0, 2.0);
  const auto hat = lipschitzified(psi);
  CHECK(*hat.lipschitz_constant() == doctest::Approx(2.0));
  CHECK(*hat.doubling_constant() == doctest::Approx(4.0));
  CHECK(hat(0.5) == hat_psi(psi, 0.5));
  CHECK(hat.at_one() == 1.0);
  // derivative (1 + psi1) psi' / (1 + psi') at the pair
  const HatPair pair = solve_hat_pair(psi, 0.5);
  const double dpsi = 2.0 * pair.t_component;
  CHECK(hat.derivative(0.5) == doctest::Approx(2.0 * dpsi / (1.0 + dpsi)).epsilon(1e-6));
}

TEST_CASE("tabulated hat profile is monotone and sampled on the grid") {
  const auto psi = CuspProfile::power(1.0, 3.0);
  const auto grid = log_grid(1e-3, 1.0, 50);
  const auto table = hat_profile(psi, grid);
  CHECK(table.kind() == ProfileKind::Tabulated);
  CHECK(table(grid[10]) == doctest::Approx(hat_psi(psi, grid[10])));
  CHECK(*table.lipschitz_constant() == doctest::Approx(2.0));
}

TEST_CASE("quotient hypothesis and its preservation") {
  const auto grid = log_grid(1e-5, 1.0, 300);
  for (double s : {2.0, 3.0}) {
    const auto psi = CuspProfile::power(1.0, s);
    CHECK(check_quotient_hypothesis(psi, grid).ok);
    CHECK(verify_monotone_quotient(psi, grid).ok);
  }
  const auto st = CuspProfile::step({0.5, 1.0}, {0.1, 0.3});
  const auto hyp = check_quotient_hypothesis(st, grid);
  CHECK_FALSE(hyp.ok);
  CHECK(hyp.first_violation.has_value());
}

TEST_CASE("doubling constant transfers with max(2, C)") {
  const auto grid = log_grid(1e-5, 0.5, 300);
  for (const auto& psi : {CuspProfile::power(1.0, 2.0), CuspProfile::power(1.0, 3.0),
                          CuspProfile::step({0.5, 1.0}, {0.1, 0.3})}) {
    const DoublingTransfer d = verify_doubling_transfer(psi, grid);
    CHECK(d.ok);
    CHECK(d.nodes_checked > 0);
    CHECK(d.bound == doctest::Approx(std::max(2.0, *psi.doubling_constant())));
  }
  const auto no_c = CuspProfile::custom("c", [](double t) { return t * t; });
  CHECK_THROWS_AS(verify_doubling_transfer(no_c, grid), ArgumentError);
}

TEST_CASE("log grid endpoints") {
  const auto g = log_grid(1e-4, 1.0, 5);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(1e-2));
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), ArgumentError);
}
