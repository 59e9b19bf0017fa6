#include "cuspext/lipschitzify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cuspext/errors.hpp"

namespace cuspext {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string bracket_message(double t_hat, double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "hat-pair bisection did not converge for t_hat = " << t_hat << "; last bracket [" << lo
     << ", " << hi << "]";
  return os.str();
}

// Slack for comparing two computed quotients that should be ordered.
bool decreases(double a, double b) {
  return b < a - (1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-14);
}

}  // namespace

HatPair solve_hat_pair(const CuspProfile& psi, double t_hat, SolverOptions opts) {
  if (!(t_hat > 0.0 && t_hat < 1.0))
    throw DomainError("solve_hat_pair: t_hat must lie in (0, 1)");
  if (!(opts.tol > 0.0)) throw ArgumentError("solve_hat_pair: tol must be positive");

  const double p1 = psi.at_one();
  const double target = (1.0 + p1) * t_hat;

  // t + c t = (1 + c) t_hat is solved by t = t_hat.
  if (psi.kind() == ProfileKind::Linear) return {t_hat, t_hat, psi(t_hat), false};

  const auto g = [&](double t) { return t + psi.value_or_zero(t); };
  double lo = 0.0;  // g(lo) <= target
  double hi = 1.0;  // g(hi) > target
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // adjacent doubles
    if (g(mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo > opts.tol) throw NumericError(bracket_message(t_hat, lo, hi));

  HatPair pair;
  pair.t_hat = t_hat;
  pair.t_component = lo;
  const double gap_r = target - lo;
  const double left = psi.value_or_zero(lo);
  const double right = psi.value_or_zero(lo, Side::Right);
  pair.on_jump = right - left > opts.tol && gap_r - left > opts.tol;
  // off a jump r = psi(t); target - t cancels badly when psi(t) << t
  pair.r_component = pair.on_jump ? gap_r : left;
  return pair;
}

double hat_psi(const CuspProfile& psi, double t_hat, SolverOptions opts) {
  if (t_hat == 1.0) return psi.at_one();
  return solve_hat_pair(psi, t_hat, opts).r_component;
}

CuspProfile lipschitzified(const CuspProfile& psi, SolverOptions opts) {
  const double p1 = psi.at_one();
  auto value = [psi, opts](double t) { return hat_psi(psi, t, opts); };
  auto derivative = [psi, opts, p1](double t) {
    if (t >= 1.0) {
      const double d = psi.derivative(1.0);
      return (1.0 + p1) * d / (1.0 + d);
    }
    const HatPair pair = solve_hat_pair(psi, t, opts);
    if (pair.on_jump || pair.t_component <= 0.0) return 1.0 + p1;
    const double d = psi.derivative(pair.t_component);
    return (1.0 + p1) * d / (1.0 + d);
  };
  CuspProfile out = CuspProfile::custom("hat(" + psi.name() + ")", value, derivative)
                        .with_lipschitz_constant(1.0 + p1);
  if (auto c = psi.doubling_constant()) out = out.with_doubling_constant(std::max(2.0, *c));
  return out;
}

CuspProfile hat_profile(const CuspProfile& psi, std::span<const double> grid, SolverOptions opts) {
  if (grid.empty()) throw ArgumentError("hat_profile: grid is empty");
  std::vector<double> nodes(grid.begin(), grid.end());
  std::vector<double> values;
  values.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double t = nodes[i];
    if (!(t > 0.0 && t <= 1.0)) throw ArgumentError("hat_profile: grid node outside (0, 1]");
    if (i > 0 && t <= nodes[i - 1]) throw ArgumentError("hat_profile: grid must be ascending");
    double v = 0.0;
    try {
      v = hat_psi(psi, t, opts);
    } catch (const NumericError& e) {
      throw NumericError("grid node " + std::to_string(i) + ": " + e.what());
    }
    // Round-off in r = target - t can dip by an ulp on flat stretches.
    if (!values.empty()) v = std::max(v, values.back());
    values.push_back(v);
  }
  return CuspProfile::tabulated(std::move(nodes), std::move(values))
      .with_lipschitz_constant(1.0 + psi.at_one())
      .with_name("hat(" + psi.name() + ")");
}

QuotientCheck check_quotient_hypothesis(const CuspProfile& psi, std::span<const double> grid) {
  QuotientCheck out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = psi(grid[i]) / grid[i];
    const double b = psi(grid[i + 1]) / grid[i + 1];
    if (decreases(a, b)) {
      out.ok = false;
      out.first_violation = std::make_pair(grid[i], grid[i + 1]);
      break;
    }
  }
  return out;
}

QuotientCheck verify_monotone_quotient(const CuspProfile& psi, std::span<const double> grid,
                                       SolverOptions opts) {
  QuotientCheck out;
  double prev_hat = 0.0;
  double prev_pair = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    double hat_q = 0.0;
    double pair_q = std::numeric_limits<double>::infinity();
    if (t < 1.0) {
      const HatPair pair = solve_hat_pair(psi, t, opts);
      hat_q = pair.r_component / t;
      if (pair.t_component > 0.0) pair_q = pair.r_component / pair.t_component;
    } else {
      hat_q = psi.at_one();
      pair_q = psi.at_one();
    }
    if (i > 0 && (decreases(prev_hat, hat_q) ||
                  (std::isfinite(prev_pair) && decreases(prev_pair, pair_q)) ||
                  (!std::isfinite(prev_pair) && std::isfinite(pair_q)))) {
      out.ok = false;
      out.first_violation = std::make_pair(grid[i - 1], t);
      return out;
    }
    prev_hat = hat_q;
    prev_pair = pair_q;
  }
  return out;
}

DoublingTransfer verify_doubling_transfer(const CuspProfile& psi, std::span<const double> grid,
                                          SolverOptions opts) {
  const auto c = psi.doubling_constant();
  if (!c) throw ArgumentError("verify_doubling_transfer: profile has no doubling constant");
  DoublingTransfer out;
  out.bound = std::max(2.0, *c);
  const double limit = 1.0 / (2.0 * (1.0 + psi.at_one()));
  for (double t : grid) {
    if (!(t > 0.0) || t > limit) continue;
    const double ratio = hat_psi(psi, 2.0 * t, opts) / hat_psi(psi, t, opts);
    ++out.nodes_checked;
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.worst_t_hat = t;
    }
  }
  out.ok = out.max_ratio <= out.bound * (1.0 + 64.0 * kEps) + 1e-12;
  return out;
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0) || !(t_max >= t_min)) throw ArgumentError("log_grid: need 0 < t_min <= t_max");
  if (count == 0) throw ArgumentError("log_grid: count must be positive");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = t_max;
    return out;
  }
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

}  // namespace cuspext
