#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cuspext/profile.hpp"

namespace cuspext {

inline constexpr double kDefaultSolverTol = 1e-12;
inline constexpr int kDefaultSolverIterations = 200;

/// The boundary point of the cusp met by the anti-diagonal line
/// t + r = (1 + psi(1)) t_hat:  psi(t_component) <= r_component <= psi(t_component+).
struct HatPair {
  double t_hat = 0.0;
  double t_component = 0.0;
  double r_component = 0.0;
  /// r_component lies strictly inside the jump gap of psi at t_component.
  bool on_jump = false;

  /// Membership in the set where the radial part dominates (r >= t).
  bool radial_dominant() const noexcept { return r_component >= t_component; }
};

struct SolverOptions {
  double tol = kDefaultSolverTol;
  int max_iterations = kDefaultSolverIterations;
};

/// Solves t + r = (1 + psi(1)) t_hat by bisection on the nondecreasing,
/// possibly discontinuous map g(t) = t + psi(t) (psi extended by 0 for t <= 0).
/// When the target falls in a jump gap [g(t0), g(t0+)] the pair is
/// (t0, target - t0) with on_jump set; this includes a jump at t0 = 0 for
/// profiles with psi(0+) > 0. Throws DomainError unless 0 < t_hat < 1 and
/// NumericError if the bracket has not shrunk below tol after max_iterations.
HatPair solve_hat_pair(const CuspProfile& psi, double t_hat, SolverOptions opts = {});

/// hat_psi(t_hat) = r_component of the pair; hat_psi(1) = psi(1).
double hat_psi(const CuspProfile& psi, double t_hat, SolverOptions opts = {});

/// hat_psi as a continuous profile (evaluated on demand) with Lipschitz
/// constant 1 + psi(1) and doubling constant max(2, C_psi) when C_psi is known.
CuspProfile lipschitzified(const CuspProfile& psi, SolverOptions opts = {});

/// hat_psi sampled on an ascending grid in (0, 1], stored as a tabulated
/// profile with lipschitz_constant = 1 + psi(1).
CuspProfile hat_profile(const CuspProfile& psi, std::span<const double> grid,
                        SolverOptions opts = {});

struct QuotientCheck {
  bool ok = true;
  /// First grid pair (t_i, t_{i+1}) where the quotient decreases.
  std::optional<std::pair<double, double>> first_violation;
};

/// psi(t)/t nondecreasing on the grid: the hypothesis of the
/// integrability-transfer results.
QuotientCheck check_quotient_hypothesis(const CuspProfile& psi, std::span<const double> grid);

/// hat_psi(t)/t nondecreasing across an ascending grid. Also checks the
/// pair quotient r/t_component, which is the quantity the transfer argument
/// actually controls.
QuotientCheck verify_monotone_quotient(const CuspProfile& psi, std::span<const double> grid,
                                       SolverOptions opts = {});

struct DoublingTransfer {
  bool ok = true;
  double bound = 0.0;           ///< max(2, C_psi)
  double max_ratio = 0.0;       ///< max hat_psi(2t)/hat_psi(t) over admissible grid nodes
  double worst_t_hat = 0.0;
  std::size_t nodes_checked = 0;
};

/// Checks hat_psi(2 t) <= max(2, C_psi) hat_psi(t) for grid nodes
/// t <= 1 / (2 (1 + psi(1))). Requires psi.doubling_constant().
DoublingTransfer verify_doubling_transfer(const CuspProfile& psi, std::span<const double> grid,
                                          SolverOptions opts = {});

/// Geometric grid of `count` nodes from t_min to t_max (inclusive).
std::vector<double> log_grid(double t_min, double t_max, std::size_t count);

}  // namespace cuspext
