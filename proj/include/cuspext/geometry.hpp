#pragma once

#include <string_view>
#include <vector>

#include "cuspext/profile.hpp"

namespace cuspext {

/// z = (t, x) with t along the cusp axis and x in R^{n-1}.
struct DomainPoint {
  double t = 0.0;
  std::vector<double> x;

  std::size_t dimension() const noexcept { return x.size() + 1; }
  /// |x|
  double radius() const noexcept;
  bool operator==(const DomainPoint&) const = default;
};

/// Euclidean distance in R^n.
double distance(const DomainPoint& a, const DomainPoint& b);

/// The outward cuspidal domain
///   {0 < t <= 1, |x| < psi(t)}  union  {1 <= t < 2, |x| < psi(1)}
/// in R^n.
struct DomainSpec {
  int n = 3;
  CuspProfile psi;
  /// 2 psi(1) < 1, the precondition of the bi-Lipschitz map.
  bool normalized = false;

  /// Validates n >= 2 and derives the normalized flag from psi(1).
  static DomainSpec make(int n, CuspProfile psi);
};

enum class RegionLabel {
  BilipU1,
  BilipU2,
  BilipU3,
  BilipU4,
  ExtOmega,
  ExtAnnulusApsi,
  ExtC1,
  ExtAnnulusC1,
  ExtC2,
  Exterior,
};

std::string_view to_string(RegionLabel label) noexcept;

/// Throws ArgumentError unless z has dimension spec.n.
void require_dimension(const DomainSpec& spec, const DomainPoint& z);

bool contains(const DomainSpec& spec, const DomainPoint& z);

/// Pieces U1..U4 covering R^n; overlaps resolved U1 > U2 > U4 > U3.
/// Requires spec.normalized (StateError otherwise).
RegionLabel classify_bilip_region(const DomainSpec& spec, const DomainPoint& z);

/// Pieces of the doubled cusp used by the extension operator:
///   ExtOmega        closure of the domain (cusp part t in [0,1], cylinder t in [1,2])
///   ExtAnnulusApsi  0 < t <= 1, psi(t) < |x| < 2 psi(t)
///   ExtAnnulusC1    1 < t <= 2, psi(1) < |x| < 2 psi(1)
///   ExtC2           2 < t < 3, |x| < 2 psi(1)
///   Exterior        everything else.
/// ExtC1 (the open inner cylinder) is reported as ExtOmega since it lies in
/// the domain; the label exists for callers that split the closure.
RegionLabel classify_extension_region(const DomainSpec& spec, const DomainPoint& z);

struct Normalization {
  DomainSpec spec;
  /// Factor applied to psi and to the x-block: (t, x) -> (t, scale * x).
  double scale = 1.0;
};

/// Rescales psi to psi / (4 psi(1)) unless psi(1) <= 1/4 already.
Normalization normalize(const DomainSpec& spec);

}  // namespace cuspext
