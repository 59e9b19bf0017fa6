#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cuspext/geometry.hpp"
#include "cuspext/lipschitzify.hpp"
#include "cuspext/random.hpp"

namespace cuspext {

/// The piecewise map carrying the cusp domain onto the domain of its
/// lipschitzified profile. Branches (with c = psi(1), r = |x|):
///   U1: ((t + r) / (1 + c), x)
///   U2: ((t + 2 (r - c)) / (1 + r - c), x)
///   U3: (t + r - c, x)
///   U4: (t, x)
/// The map only depends on psi through psi(1) and the region split.
DomainPoint forward_map(const DomainSpec& spec, const DomainPoint& z);

/// Branch-wise closed-form inverse; falls back to bisection in t (the first
/// coordinate is strictly increasing in t for fixed x) if the closed form
/// does not reproduce w to 1e-9.
DomainPoint inverse_map(const DomainSpec& spec, const DomainPoint& w);

/// Analytic derivative of forward_map away from seams (x = 0 uses the
/// subgradient with x/|x| := 0).
Eigen::MatrixXd forward_jacobian(const DomainSpec& spec, const DomainPoint& z);

/// Distance from z to the nearest seam of the piecewise map (including the
/// axis x = 0 where |x| is not differentiable, for t < 2).
double bilip_seam_distance(const DomainSpec& spec, const DomainPoint& z);

/// Central finite-difference Jacobian. Throws ArgumentError if z is within
/// 2h of a seam.
Eigen::MatrixXd jacobian_estimate(const DomainSpec& spec, const DomainPoint& z, double h);

/// [t_min, t_max] x B^{n-1}(0, radius)
struct SamplingBox {
  double t_min = -1.0;
  double t_max = 4.0;
  double radius = 2.0;
};

struct DistortionReport {
  std::size_t sample_count = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// Extremes of the smallest/largest singular value of the Jacobian over
  /// seam-free samples.
  double min_jacobian = 0.0;
  double max_jacobian = 0.0;
  std::size_t jacobian_samples = 0;
};

/// Difference-quotient and Jacobian extremes over explicit pairs. Pairs with
/// a == b are skipped and not counted.
DistortionReport distortion_from_pairs(const DomainSpec& spec,
                                       std::span<const std::pair<DomainPoint, DomainPoint>> pairs);

/// Samples pair_count pairs in the box: half independent uniform pairs, half
/// local pairs at log-uniform separations in [1e-4, 1].
DistortionReport distortion_sample(const DomainSpec& spec, std::size_t pair_count,
                                   std::uint64_t seed, SamplingBox box = {});

struct ImageCheck {
  bool ok = true;
  std::size_t checked_forward = 0;
  std::size_t checked_inverse = 0;
  std::size_t skipped_band = 0;
  std::optional<DomainPoint> counterexample;
  std::string failure;
};

/// Samples points of the domain and checks forward_map lands in the domain of
/// hat_psi; samples points of the hat domain and checks inverse_map lands in
/// the original domain. Points within `band` of either boundary are skipped.
ImageCheck verify_image(const DomainSpec& spec, std::size_t sample_count, std::uint64_t seed,
                        double band = 1e-8, SolverOptions opts = {});

struct SeamModulus {
  std::string seam;
  std::vector<double> deltas;
  /// max |O(a) - O(b)| / delta over the samples, one entry per delta.
  std::vector<double> modulus;
  bool stable = true;
};

/// Straddles every seam of the map (U1|U2, U1|U3, U2|U3, U2|U4, U3|U4) with
/// pairs a distance delta apart along the seam normal in the meridian plane.
/// Stable means the modulus stays bounded by `max_modulus` and varies by less
/// than a factor `max_spread` across deltas.
std::vector<SeamModulus> bilip_seam_continuity(const DomainSpec& spec,
                                               std::span<const double> deltas,
                                               std::size_t samples_per_seam, std::uint64_t seed,
                                               double max_modulus = 10.0,
                                               double max_spread = 2.0);

/// Random point with t uniform in [t_min, t_max] and x uniform in the ball.
DomainPoint uniform_point_in_box(int n, const SamplingBox& box, Rng& rng);

}  // namespace cuspext
