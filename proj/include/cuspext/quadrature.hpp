#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cuspext/extension.hpp"
#include "cuspext/field.hpp"
#include "cuspext/geometry.hpp"

namespace cuspext {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computed by Newton iteration on the Legendre recurrence; exact for
/// polynomials of degree <= 2 order - 1.
GaussRule gauss_legendre(int order);

struct QuadratureOptions {
  /// t-panels on (0, 1] end at ratio^k, k = 0..levels, plus [0, ratio^levels].
  double grading_ratio = 0.5;
  int grading_levels = 40;
  int t_order = 8;
  int radial_order = 8;
  /// Uniform t-panels per unit length on t > 1.
  int cylinder_panels = 4;
  /// Uniform angles on the circle (n = 3).
  int angular_nodes = 32;
  /// Random directions on S^{n-2} (n >= 4), drawn from `seed`.
  int mc_directions = 64;
  std::uint64_t seed = 1;
  /// Gradient samples closer to a seam than seam_band times the local
  /// cross-section radius are skipped.
  double seam_band = 1e-6;
};

/// Cylindrical product rule t x radius x angle. Each refinement halves every
/// t- and radial panel and doubles the angular resolution.
class QuadratureScheme {
 public:
  explicit QuadratureScheme(QuadratureOptions opts = {});

  const QuadratureOptions& options() const noexcept { return opts_; }
  int refinement_level() const noexcept { return level_; }
  QuadratureScheme refined() const;
  /// One-line resolution descriptor.
  std::string describe() const;

 private:
  QuadratureOptions opts_;
  int level_ = 0;
};

/// {t_begin < t < t_end, inner(t) <= |x| <= outer(t)}. Seams of integrands
/// should coincide with piece boundaries.
struct RadialPiece {
  std::string label;
  double t_begin = 0.0;
  double t_end = 1.0;
  std::function<double(double)> inner;
  std::function<double(double)> outer;
  /// Graded t-panels toward t_begin = 0.
  bool graded = false;
};

struct IntegrationRegion {
  int n = 3;
  std::vector<RadialPiece> pieces;
  /// Extra t-panel boundaries (jump points of the profile).
  std::vector<double> breaks;

  /// The cusp domain: cusp part plus cylinder [1, 2].
  static IntegrationRegion domain(const DomainSpec& spec);
  /// Support of the extension: the domain, A_psi, and [1, 3] x B(0, 2 psi(1)),
  /// split along every seam of the extension.
  static IntegrationRegion extension_support(const DomainSpec& spec);
  /// [t_begin, t_end] x B(0, radius).
  static IntegrationRegion cylinder(int n, double t_begin, double t_end, double radius);
};

/// Contribution of one t-node to an integral.
struct SliceContribution {
  std::string piece;
  double t = 0.0;
  /// Cross-section measure times the t-weight.
  double measure = 0.0;
  double value = 0.0;
};

struct Integral {
  double value = 0.0;
  std::size_t nodes = 0;
  std::vector<SliceContribution> slices;
};

/// Integrates f over the region with pairwise summation in a fixed order.
/// Throws NumericError at the first non-finite sample.
Integral integrate(const IntegrationRegion& region, const QuadratureScheme& scheme,
                   const std::function<double(const DomainPoint&)>& f,
                   bool keep_slices = false);

/// (integral of |u|^p)^(1/p); p in [1, inf).
double lp_norm(const ScalarField& u, const IntegrationRegion& region, double p,
               const QuadratureScheme& scheme);

/// Analytic gradient when available, otherwise central differences with
/// step min(1e-6, seam_distance / 4); a coordinate whose stencil would leave
/// the piece of z uses a one-sided difference. Throws DomainError on a seam.
std::vector<double> gradient(const ScalarField& u, const DomainPoint& z,
                             const QuadratureScheme& scheme);

struct SobolevNorm {
  double lp = 0.0;
  double gradient_lp = 0.0;
  double total = 0.0;
  std::size_t nodes = 0;
  std::size_t excluded_nodes = 0;
};

/// ||u||_p + || |grad u| ||_p.
SobolevNorm w1p_norm_detail(const ScalarField& u, const IntegrationRegion& region, double p,
                            const QuadratureScheme& scheme);
double w1p_norm(const ScalarField& u, const IntegrationRegion& region, double p,
                const QuadratureScheme& scheme);

struct NormReport {
  std::string field;
  std::string profile;
  int n = 3;
  double p = 1.0;
  double q = 1.0;
  double norm_u_W1p = 0.0;
  double norm_Eu_W1q = 0.0;
  /// norm_Eu_W1q / norm_u_W1p; empty when the denominator vanishes.
  std::optional<double> ratio;
  bool zero_denominator = false;
  /// |ratio' - ratio| / ratio after one refinement step.
  std::optional<double> refinement_delta;
  std::optional<double> refined_ratio;
  std::string resolution;
  std::size_t nodes = 0;
  std::size_t excluded_nodes = 0;
};

/// Builds E(u) for the Lipschitz profile of `spec` and compares
/// ||E(u)||_{W^{1,q}(R^n)} with ||u||_{W^{1,p}(domain)}. Requires 1 <= q <= p < inf.
NormReport extension_ratio(const ScalarField& u, const DomainSpec& spec, double p, double q,
                           const QuadratureScheme& scheme,
                           SecondCylinderMap second_map = SecondCylinderMap::Reflect);

/// Per-slice contributions of |u|^p as CSV: piece,t,measure,value.
void write_slice_csv(std::ostream& out, const std::vector<SliceContribution>& slices);

}  // namespace cuspext
