#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cuspext/bilip.hpp"
#include "cuspext/field.hpp"
#include "cuspext/geometry.hpp"
#include "cuspext/lipschitzify.hpp"

namespace cuspext {

/// How the far cylinder (2, 3) x B(0, 2 psi(1)) is folded back before the
/// t-cutoff 3 - t is applied.
///   Reflect: (t, x) -> (4 - t, x), onto (1, 2); fixes t = 2.
///   Shift1:  (t, x) -> (t - 1, x), onto (1, 2).
///   Shift2:  (t, x) -> (t - 2, x), onto (0, 1).
/// Only Reflect yields a field that is continuous across t = 2 for generic u;
/// the shifts are kept selectable so the seam check can demonstrate this.
enum class SecondCylinderMap { Reflect, Shift1, Shift2 };

std::string_view to_string(SecondCylinderMap m) noexcept;
SecondCylinderMap parse_second_cylinder_map(std::string_view name);

/// Immutable geometry of the extension collar for a Lipschitz profile:
/// annulus A_psi = {0 < t <= 1, psi < |x| < 2 psi}, the cylinder
/// [1, 3) x B(0, 2 psi(1)) split at t = 2, and the inner cylinder
/// (1, 2) x B(0, psi(1)).
class ExtensionContext {
 public:
  /// Throws ArgumentError if psi has no Lipschitz constant.
  static ExtensionContext make(DomainSpec spec,
                               SecondCylinderMap second_map = SecondCylinderMap::Reflect);

  const DomainSpec& spec() const noexcept { return spec_; }
  double psi_at_one() const noexcept { return psi1_; }
  double lipschitz_constant() const noexcept { return lipschitz_; }
  /// Radius of the enclosing cylinder, 2 psi(1).
  double cylinder_radius() const noexcept { return 2.0 * psi1_; }
  SecondCylinderMap second_map() const noexcept { return second_map_; }

 private:
  ExtensionContext(DomainSpec spec, SecondCylinderMap m);
  DomainSpec spec_;
  double psi1_;
  double lipschitz_;
  SecondCylinderMap second_map_;
};

/// (t, (3/2 psi(t) - |x|/2) x/|x|) on the closure of A_psi (minus the axis).
DomainPoint reflect_cusp(const ExtensionContext& ctx, const DomainPoint& z);
/// 2 - |x|/psi(t) on the closure of A_psi.
double cutoff_L(const ExtensionContext& ctx, const DomainPoint& z);

/// (t, (3/2 psi(1) - |x|/2) x/|x|) for 1 <= t <= 2, psi(1) <= |x| <= 2 psi(1).
DomainPoint reflect_annulus1(const ExtensionContext& ctx, const DomainPoint& z);
/// 2 - |x|/psi(1) on the same closed annular cylinder.
double cutoff_L1(const ExtensionContext& ctx, const DomainPoint& z);

/// Folding of the far cylinder per ctx.second_map(), for 2 <= t <= 3, |x| <= 2 psi(1).
DomainPoint reflect_shift2(const ExtensionContext& ctx, const DomainPoint& z);
/// 3 - t on the closed far cylinder.
double cutoff_L2(const ExtensionContext& ctx, const DomainPoint& z);

/// Reflection/cut-off extension of u from the domain to R^n:
///   u            on the closure of the domain
///   L (u o R)    on A_psi
///   L1 (u o R1)  on the annular part of (1, 2]
///   L2 (E o R2)  on (2, 3) (E from the first three branches)
///   0            elsewhere.
/// The result carries an analytic gradient when u does.
ScalarField extend_lipschitz(const ExtensionContext& ctx, const ScalarField& u);

/// Extension for an arbitrary profile: normalizes psi if needed, transports u
/// to the lipschitzified domain with the bi-Lipschitz map, extends there, and
/// pulls back: z -> E_hat(u o O^-1)(O(z)).
ScalarField extend_general(const DomainSpec& spec, const ScalarField& u, SolverOptions opts = {},
                           SecondCylinderMap second_map = SecondCylinderMap::Reflect);

/// Conservative distance from z to the nearest seam of the piecewise
/// definition (|x| = psi, 2 psi; t = 0, 1, 2, 3; |x| = psi(1), 2 psi(1)).
double extension_seam_distance(const ExtensionContext& ctx, const DomainPoint& z);

/// Straddle-pair moduli max |E(a) - E(b)| / delta across every seam of the
/// extension. Stable iff no modulus exceeds `max_spread` times the modulus at
/// the coarsest delta (plus a 1e-6 noise floor); a jump makes it grow like
/// 1/delta.
std::vector<SeamModulus> extension_seam_continuity(const ExtensionContext& ctx,
                                                   const ScalarField& extended,
                                                   std::span<const double> deltas,
                                                   std::size_t samples_per_seam,
                                                   std::uint64_t seed, double max_spread = 2.0);

struct BoundaryDecay {
  bool ok = true;
  std::size_t normals = 0;
  /// max over samples of |E(z)| / (C_b * delta)
  double worst_ratio = 0.0;
  DomainPoint worst_point;
};

/// Samples boundary points of the doubled cusp (lateral surface, outer
/// cylinder, end cap t = 3), steps inward by each delta along the axis-aligned
/// normal and checks |E(u)| <= C_b * delta with C_b = sup|u| / min(1, psi(t_b)).
BoundaryDecay boundary_decay(const ExtensionContext& ctx, const ScalarField& u,
                             const ScalarField& extended, std::size_t normals,
                             std::span<const double> deltas, std::uint64_t seed);

}  // namespace cuspext
