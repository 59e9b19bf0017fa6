#include "cuspext/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "cuspext/errors.hpp"
#include "cuspext/lipschitzify.hpp"
#include "cuspext/quadrature.hpp"

namespace cuspext {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kTailOrder = 20;
constexpr double kRangeSlack = 1e-12;

bool leq(double a, double b) { return a <= b + kRangeSlack * std::max(1.0, std::abs(b)); }

// integral of u^-beta over [a, b], a > 0
double power_segment(double a, double b, double beta) {
  if (std::abs(beta - 1.0) < 1e-12) return std::log(b / a);
  return (std::pow(a, 1.0 - beta) - std::pow(b, 1.0 - beta)) / (beta - 1.0);
}

// Exponent beta with I_a / I_b matching pure u^-beta decay between the
// log-variable intervals of levels ka and kb.
double fit_algebraic_exponent(int ka, int kb, double ia, double ib) {
  const double target = std::log(ia / ib);
  const auto model = [&](double beta) {
    return std::log(power_segment(ka * kLn2, (ka + 1) * kLn2, beta) /
                    power_segment(kb * kLn2, (kb + 1) * kLn2, beta));
  };
  double lo = -20.0, hi = 200.0;
  if (model(hi) < target) return hi;
  if (model(lo) > target) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (model(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Tail integrals of f(t) dt/t over [2^-(k+1), 2^-k], k = first..first+levels-1,
// using the variable u = -log t.
std::vector<double> dyadic_tails(const std::function<double(double)>& f, int first, int levels,
                                 std::span<const double> breakpoints) {
  const GaussRule rule = gauss_legendre(kTailOrder);
  std::vector<double> tails;
  tails.reserve(static_cast<std::size_t>(levels));
  for (int k = first; k < first + levels; ++k) {
    const double ua = k * kLn2, ub = (k + 1) * kLn2;
    std::vector<double> cuts{ua, ub};
    for (double b : breakpoints) {
      const double u = -std::log(b);
      if (u > ua && u < ub) cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
        sum += 0.5 * (b - a) * rule.weights[i] * f(std::exp(-u));
      }
    }
    tails.push_back(sum);
  }
  return tails;
}

struct MixedFit {
  double log_rho = 0.0;
  double beta = 0.0;
};

constexpr std::size_t kFitLevels = 30;
constexpr double kFlatRate = 1e-5;

MixedFit fit_mixed_decay(const std::vector<double>& tails, int first) {
  const std::size_t m = std::min(kFitLevels, tails.size());
  const std::size_t start = tails.size() - m;
  const double k_ref = first + static_cast<double>(tails.size()) - 1.0;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), 4);
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double k = first + static_cast<double>(start + i);
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = k - k_ref;
    a(r, 2) = -std::log((k + 0.5) / (k_ref + 0.5));
    // midpoint-rule correction of the algebraic factor
    a(r, 3) = 1.0 / ((k + 0.5) * (k + 0.5)) - 1.0 / ((k_ref + 0.5) * (k_ref + 0.5));
    b(r) = std::log(tails[start + i]);
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  return {x(1), x(2)};
}

// Sum over k > K of the fitted model, anchored at I_K.
double geometric_remainder(double last, int K, const MixedFit& fit, double partial) {
  double sum = 0.0;
  for (int j = 1; j < 10'000'000; ++j) {
    const double term =
        last * std::exp(j * fit.log_rho - fit.beta * std::log((K + j + 0.5) / (K + 0.5)));
    sum += term;
    if (term <= 1e-17 * (partial + sum)) break;
  }
  return sum;
}

IntegralCheck classify_tails(std::vector<double> tails, int first, double tol) {
  IntegralCheck out;
  out.tails = std::move(tails);
  const auto& I = out.tails;
  const int levels = static_cast<int>(I.size());
  const int K = first + levels - 1;  // deepest level index
  double partial = 0.0;
  for (double v : I) partial += v;
  out.partial_sum = partial;

  if (std::any_of(I.begin(), I.end(), [](double v) { return !std::isfinite(v); })) {
    out.verdict = Convergence::Divergent;
    out.decay = "none";
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  const double last = I.back(), prev = I[I.size() - 2];
  if (last == 0.0) {
    // tails underflowed: faster than any geometric rate
    out.verdict = Convergence::Convergent;
    out.decay = "geometric";
    out.value = partial;
    return out;
  }
  const double rho = last / prev;
  out.tail_ratio = rho;
  if (rho >= 1.0 - tol) {
    out.verdict = Convergence::Divergent;
    out.decay = "none";
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  // log I_k = c + k log(rho) - beta log(k + 1/2) + gamma / (k + 1/2)^2 over
  // the deepest levels.
  // A rate rho slightly above 1 can hide behind the algebraic factor for
  // 60 levels, so a plain ratio test is not enough.
  const MixedFit fit = fit_mixed_decay(I, first);
  out.tail_ratio = std::exp(fit.log_rho);
  if (std::exp(fit.log_rho) <= kGeometricRatioThreshold) {
    out.decay = std::abs(fit.beta) < 1e-3 ? "geometric" : "mixed";
    out.decay_exponent = fit.beta;
    out.verdict = Convergence::Convergent;
    out.value = partial + geometric_remainder(last, K, fit, partial);
    return out;
  }
  if (std::exp(-fit.log_rho) <= kGeometricRatioThreshold) {
    out.decay = std::abs(fit.beta) < 1e-3 ? "geometric" : "mixed";
    out.decay_exponent = fit.beta;
    out.verdict = Convergence::Divergent;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  const std::size_t span = 20;
  const int ka = K - static_cast<int>(span);
  const double beta = fit_algebraic_exponent(ka, K, I[I.size() - 1 - span], last);
  out.decay = "algebraic";
  out.decay_exponent = beta;
  // a residual rate the fit cannot tell from 1 leaves the verdict open
  const bool flat = std::abs(fit.log_rho) <= kFlatRate;
  if (!flat) {
    out.verdict = Convergence::Inconclusive;
    out.value = partial;
  } else if (beta > 1.05) {
    out.verdict = Convergence::Convergent;
    const double u_end = (K + 1) * kLn2;
    const double tail_model = std::pow(u_end, 1.0 - beta) / (beta - 1.0);
    out.value = partial + last * tail_model / power_segment(K * kLn2, u_end, beta);
  } else if (beta < 0.95) {
    out.verdict = Convergence::Divergent;
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.verdict = Convergence::Inconclusive;
    out.value = partial;
  }
  return out;
}

void require_inc_params(double s, int n) {
  if (!(s > 1.0) || !std::isfinite(s)) throw ArgumentError("integrability check: need s > 1");
  if (n < 2) throw ArgumentError("integrability check: need n >= 2");
}

double log_ratio_power(const CuspProfile& psi, double s, int n, double t) {
  return n / (s - 1.0) * (s * std::log(t) - std::log(psi(t)));
}

}  // namespace

std::string_view to_string(Convergence c) noexcept {
  switch (c) {
    case Convergence::Convergent: return "convergent";
    case Convergence::Divergent: return "divergent";
    case Convergence::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(Mechanism m) noexcept {
  switch (m) {
    case Mechanism::E1: return "E1";
    case Mechanism::E2: return "E2";
    case Mechanism::E3: return "E3";
    case Mechanism::LimitCase: return "LimitCase";
    case Mechanism::None: return "None";
  }
  return "?";
}

IntegralCheck check_inc1(const CuspProfile& psi, double s, int n, double tol) {
  require_inc_params(s, n);
  const auto f = [&](double t) { return std::exp(log_ratio_power(psi, s, n, t)); };
  return classify_tails(dyadic_tails(f, 0, kTailLevels, psi.breakpoints()), 0, tol);
}

double log_weight_exponent(int n, double p) {
  if (!(p > n - 1.0)) throw ArgumentError("log weight exponent: need p > n - 1");
  return (n - 2.0) * p / (p + 1.0 - n);
}

IntegralCheck check_inc2(const CuspProfile& psi, double s, int n, double p, double tol) {
  require_inc_params(s, n);
  if (n < 3) throw ArgumentError("check_inc2: need n >= 3");
  const double alpha = log_weight_exponent(n, p);
  const auto f = [&](double t) {
    const double log_q = std::abs(std::log(psi(t)) - std::log(t));
    return std::exp(log_ratio_power(psi, s, n, t) - alpha * std::log(log_q));
  };
  IntegralCheck out = classify_tails(dyadic_tails(f, 1, kTailLevels, psi.breakpoints()), 1, tol);
  out.alpha = alpha;
  return out;
}

DoublingCheck check_doubling(const CuspProfile& psi, std::span<const double> grid) {
  DoublingCheck out;
  std::vector<double> ts(grid.begin(), grid.end());
  for (double t : ts)
    if (!(t > 0.0 && t < 0.5)) throw ArgumentError("check_doubling: grid must lie in (0, 1/2)");
  std::sort(ts.begin(), ts.end());
  std::vector<double> ratios;
  for (double t : ts) {
    const double lower = psi(t);
    const double r = lower > 0.0 ? psi(2.0 * t) / lower : std::numeric_limits<double>::infinity();
    ratios.push_back(r);
    if (!(r <= out.constant)) {
      out.constant = r;
      out.worst_t = t;
    }
  }
  out.nodes = ts.size();
  if (ratios.empty()) return out;
  // ascending t: unbounded growth shows as a ratio decreasing in t over the
  // small-t half of the grid
  const std::size_t half = std::max<std::size_t>(2, ratios.size() / 2);
  bool monotone = true;
  for (std::size_t i = 1; i < std::min(half, ratios.size()); ++i)
    if (!(ratios[i - 1] >= ratios[i])) monotone = false;
  out.unbounded = monotone && out.constant > 1e6;
  return out;
}

double threshold_s1(int n, double p) {
  if (n < 3) throw ArgumentError("threshold s1: need n >= 3");
  if (!(p >= n - 1.0) || !std::isfinite(p)) throw ArgumentError("threshold s1: need n - 1 <= p < inf");
  const double m = n - 1.0;
  return (n * p - m) / (m * m);
}

double threshold_s2(int n, double p, double q) {
  if (n < 3) throw ArgumentError("threshold s2: need n >= 3");
  const double m = n - 1.0;
  if (!(q >= 1.0 && q < m)) throw ArgumentError("threshold s2: need 1 <= q < n - 1");
  const double upper = m * q / (m - q);
  if (!(p >= q && p < upper))
    throw ArgumentError("threshold s2: need q <= p < (n - 1) q / (n - 1 - q) = " +
                        std::to_string(upper));
  return (p * q + p - q) / (p * q + m * (q - p));
}

Thresholds thresholds(int n, double p, double q) {
  Thresholds t;
  if (q == n - 1.0) {
    t.s1 = threshold_s1(n, p);
  } else if (q < n - 1.0) {
    t.s2 = threshold_s2(n, p, q);
  } else {
    throw ArgumentError("thresholds: need q <= n - 1");
  }
  return t;
}

bool mechanism_range(Mechanism m, int n, double s, double p, double q) {
  const double a = 1.0 + (n - 1.0) * s;
  switch (m) {
    case Mechanism::E1: return leq(a / n, p) && leq(q, n * p / a);
    case Mechanism::E2:
      return leq(a / (2.0 + (n - 2.0) * s), p) && leq(q, a * p / (a + (s - 1.0) * p));
    case Mechanism::E3:
      return leq(((n - 1.0) * (n - 1.0) * s + (n - 1.0)) / n, p) && leq(q, n - 1.0);
    case Mechanism::LimitCase:
      return q < n - 1.0 && leq((n - 1.0) * q / (n - 1.0 - q), p);
    case Mechanism::None: return false;
  }
  return false;
}

bool AdmissibilityVerdict::has(Mechanism m) const {
  return std::find(mechanisms.begin(), mechanisms.end(), m) != mechanisms.end();
}

AdmissibilityVerdict admissible_pq(int n, double s, double p, double q) {
  if (n < 3) throw ArgumentError("admissible_pq: need n >= 3");
  if (!(s > 1.0) || !std::isfinite(s)) throw ArgumentError("admissible_pq: need s > 1");
  if (!(q >= 1.0)) throw ArgumentError("admissible_pq: need q >= 1");
  if (!(q <= p)) throw ArgumentError("admissible_pq: need q <= p");
  if (!std::isfinite(p)) throw ArgumentError("admissible_pq: need p < inf");
  AdmissibilityVerdict v;
  v.n = n;
  v.s = s;
  v.p = p;
  v.q = q;
  for (Mechanism m : {Mechanism::E1, Mechanism::E2, Mechanism::E3, Mechanism::LimitCase})
    if (mechanism_range(m, n, s, p, q)) v.mechanisms.push_back(m);
  if (v.mechanisms.empty()) v.mechanisms.push_back(Mechanism::None);
  const double m = n - 1.0;
  if (q == m && p >= m) v.thresholds.s1 = threshold_s1(n, p);
  if (q < m && p < m * q / (m - q)) v.thresholds.s2 = threshold_s2(n, p, q);
  return v;
}

AdmissibilityVerdict assess_profile(const CuspProfile& psi, int n, double s, double p, double q,
                                    double tol) {
  AdmissibilityVerdict v = admissible_pq(n, s, p, q);
  bool ok = v.has(Mechanism::LimitCase);
  if (v.has(Mechanism::E1) || v.has(Mechanism::E2)) {
    IntegralCheck c = check_inc1(psi, s, n, tol);
    ok = ok || c.verdict == Convergence::Convergent;
    v.condition_values.push_back({"inc1", std::move(c)});
  }
  if (v.has(Mechanism::E3)) {
    IntegralCheck c = check_inc2(psi, s, n, p, tol);
    ok = ok || c.verdict == Convergence::Convergent;
    v.condition_values.push_back({"inc2", std::move(c)});
  }
  const std::vector<double> grid = log_grid(1e-6, 1.0, 200);
  v.quotient_hypothesis = check_quotient_hypothesis(psi, grid).ok;
  v.admissible = ok;
  return v;
}

std::optional<double> max_comparison_exponent(Mechanism m, int n, double p, double q,
                                              double s_cap) {
  const auto in_range = [&](double s) { return mechanism_range(m, n, s, p, q); };
  double lo = 1.0 + 1e-12;
  if (!in_range(lo)) return std::nullopt;
  if (in_range(s_cap)) return s_cap;
  double hi = s_cap;
  // the admissible set in s is an interval (1, s_max]
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (in_range(mid) ? lo : hi) = mid;
  }
  return lo;
}

SweepResult admissibility_sweep(int n, double p, double q, std::span<const double> sigmas,
                                double tol) {
  if (n < 3) throw ArgumentError("admissibility sweep: need n >= 3");
  if (!(q >= 1.0)) throw ArgumentError("admissibility sweep: need q >= 1");
  if (!(q <= p)) throw ArgumentError("admissibility sweep: need q <= p");
  if (!std::isfinite(p)) throw ArgumentError("admissibility sweep: need p < inf");
  SweepResult out;
  out.n = n;
  out.p = p;
  out.q = q;
  out.limit_case = mechanism_range(Mechanism::LimitCase, n, 2.0, p, q);
  try {
    out.analytic = thresholds(n, p, q);
  } catch (const ArgumentError&) {
  }
  const auto e1 = max_comparison_exponent(Mechanism::E1, n, p, q);
  const auto e2 = max_comparison_exponent(Mechanism::E2, n, p, q);
  const auto e3 = max_comparison_exponent(Mechanism::E3, n, p, q);

  for (double sigma : sigmas) {
    if (!(sigma >= 1.0)) throw ArgumentError("admissibility sweep: cusp exponents must be >= 1");
    const CuspProfile psi = CuspProfile::power(1.0, sigma);
    SweepRow row;
    row.sigma = sigma;
    row.s_max_e1 = e1;
    row.s_max_e2 = e2;
    row.s_max_e3 = e3;
    if (out.limit_case) row.via.push_back(Mechanism::LimitCase);
    // inc1 is monotone in s for power profiles; test it at the widest s
    std::optional<double> s_inc1;
    if (e1) s_inc1 = *e1;
    if (e2) s_inc1 = s_inc1 ? std::max(*s_inc1, *e2) : *e2;
    if (s_inc1) {
      const IntegralCheck c = check_inc1(psi, *s_inc1, n, tol);
      row.inc1 = c.verdict;
      row.inc1_value = c.value;
      if (c.verdict == Convergence::Convergent) {
        if (e1 && *e1 == *s_inc1) row.via.push_back(Mechanism::E1);
        if (e2 && *e2 == *s_inc1) row.via.push_back(Mechanism::E2);
      }
    }
    if (e3 && p > n - 1.0) {
      const IntegralCheck c = check_inc2(psi, *e3, n, p, tol);
      row.inc2 = c.verdict;
      row.inc2_value = c.value;
      if (c.verdict == Convergence::Convergent) row.via.push_back(Mechanism::E3);
    }
    row.admissible = !row.via.empty();
    out.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    if (out.rows[i].admissible && !out.rows[i + 1].admissible) {
      out.frontier = 0.5 * (out.rows[i].sigma + out.rows[i + 1].sigma);
      break;
    }
  }
  return out;
}

std::vector<double> arithmetic_grid(double first, double last, double step) {
  if (!(step > 0.0) || !(last >= first)) throw ArgumentError("grid: need step > 0 and last >= first");
  std::vector<double> g;
  const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
  for (long i = 0; i <= count; ++i) g.push_back(first + step * static_cast<double>(i));
  return g;
}

}  // namespace cuspext
