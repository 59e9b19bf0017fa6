#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuspext/profile.hpp"

namespace cuspext {

enum class Convergence { Convergent, Divergent, Inconclusive };
std::string_view to_string(Convergence c) noexcept;

inline constexpr int kTailLevels = 60;
inline constexpr double kGeometricRatioThreshold = 0.999;
inline constexpr double kDefaultClassifyTol = 1e-9;

/// Classification of an improper integral at t = 0 from its dyadic tails
/// I_k = integral over [2^-(k+1), 2^-k].
struct IntegralCheck {
  Convergence verdict = Convergence::Inconclusive;
  /// Partial sum plus the fitted remainder when convergent.
  double value = 0.0;
  double partial_sum = 0.0;
  /// Ratio I_{K} / I_{K-1} of the deepest level.
  double tail_ratio = 0.0;
  /// Fitted algebraic decay exponent of I_k in k (0 when geometric).
  double decay_exponent = 0.0;
  std::string decay;  ///< "geometric", "algebraic", "none"
  std::vector<double> tails;
  /// Log-weight exponent (n - 2) p / (p + 1 - n) of the second criterion.
  std::optional<double> alpha;
};

/// integral over (0, 1] of (t^s / psi)^(n / (s - 1)) dt / t. Requires s > 1, n >= 2.
IntegralCheck check_inc1(const CuspProfile& psi, double s, int n,
                         double tol = kDefaultClassifyTol);

/// integral over (0, 1/2] of (t^s / psi)^(n / (s - 1)) |log(psi / t)|^-alpha dt / t.
/// The upper limit stays away from t = 1, where psi(t)/t may equal 1 and
/// the weight is singular. Requires s > 1, n >= 3, p > n - 1.
IntegralCheck check_inc2(const CuspProfile& psi, double s, int n, double p,
                         double tol = kDefaultClassifyTol);

double log_weight_exponent(int n, double p);

struct DoublingCheck {
  /// max psi(2t) / psi(t) over the grid
  double constant = 0.0;
  double worst_t = 0.0;
  bool unbounded = false;
  std::size_t nodes = 0;
};

/// Grid must lie in (0, 1/2). Unbounded means the ratio increases
/// monotonically toward t -> 0 and exceeds 1e6.
DoublingCheck check_doubling(const CuspProfile& psi, std::span<const double> grid);

enum class Mechanism { E1, E2, E3, LimitCase, None };
std::string_view to_string(Mechanism m) noexcept;

struct Thresholds {
  std::optional<double> s1;
  std::optional<double> s2;
};

/// (n p - (n - 1)) / (n - 1)^2; requires n - 1 <= p < inf.
double threshold_s1(int n, double p);
/// (p q + p - q) / (p q + (n - 1)(q - p)); requires 1 <= q < n - 1 and
/// q <= p < (n - 1) q / (n - 1 - q).
double threshold_s2(int n, double p, double q);
/// s1 when q = n - 1, s2 when q < n - 1; ArgumentError otherwise.
Thresholds thresholds(int n, double p, double q);

struct ConditionValue {
  std::string name;  ///< "inc1" or "inc2"
  IntegralCheck check;
};

struct AdmissibilityVerdict {
  int n = 3;
  double s = 2.0;
  double p = 1.0;
  double q = 1.0;
  /// Every mechanism whose parameter range contains (p, q); {None} if empty.
  std::vector<Mechanism> mechanisms;
  Thresholds thresholds;
  /// Filled by assess_profile.
  std::vector<ConditionValue> condition_values;
  /// psi(t)/t nondecreasing on the check grid, when a profile was assessed.
  std::optional<bool> quotient_hypothesis;
  /// Filled by assess_profile: some mechanism applies and its integral converges.
  std::optional<bool> admissible;

  bool has(Mechanism m) const;
  Mechanism primary() const { return mechanisms.front(); }
};

/// Pure parameter-range evaluation of the four mechanisms. Requires n >= 3,
/// s > 1 and 1 <= q <= p < inf.
AdmissibilityVerdict admissible_pq(int n, double s, double p, double q);

/// Range membership of a single mechanism (no profile integrals).
bool mechanism_range(Mechanism m, int n, double s, double p, double q);

/// admissible_pq plus the integrability conditions and the quotient
/// hypothesis for a concrete profile.
AdmissibilityVerdict assess_profile(const CuspProfile& psi, int n, double s, double p, double q,
                                    double tol = kDefaultClassifyTol);

/// Largest comparison exponent s in (1, s_cap] admitted by the range of m,
/// or empty if none.
std::optional<double> max_comparison_exponent(Mechanism m, int n, double p, double q,
                                              double s_cap = 50.0);

struct SweepRow {
  double sigma = 0.0;  ///< cusp exponent of psi = t^sigma
  bool admissible = false;
  /// Mechanisms whose integral converges at their largest admissible s.
  std::vector<Mechanism> via;
  std::optional<double> s_max_e1, s_max_e2, s_max_e3;
  std::optional<Convergence> inc1, inc2;
  std::optional<double> inc1_value, inc2_value;
};

struct SweepResult {
  int n = 3;
  double p = 1.0;
  double q = 1.0;
  std::vector<SweepRow> rows;
  /// Midpoint between the last admissible and first inadmissible sigma.
  std::optional<double> frontier;
  /// Analytic thresholds, when defined for (n, p, q).
  Thresholds analytic;
  bool limit_case = false;
};

/// For each sigma: psi = t^sigma is admissible iff some mechanism's
/// integrability condition converges at that mechanism's largest admissible
/// comparison exponent, or the limit case applies.
SweepResult admissibility_sweep(int n, double p, double q, std::span<const double> sigmas,
                                double tol = kDefaultClassifyTol);

std::vector<double> arithmetic_grid(double first, double last, double step);

}  // namespace cuspext
