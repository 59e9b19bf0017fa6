#include "cuspext/geometry.hpp"

#include <cmath>

#include "cuspext/errors.hpp"

namespace cuspext {

double DomainPoint::radius() const noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(const DomainPoint& a, const DomainPoint& b) {
  if (a.x.size() != b.x.size()) throw ArgumentError("distance: dimension mismatch");
  double s = (a.t - b.t) * (a.t - b.t);
  for (std::size_t i = 0; i < a.x.size(); ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
  return std::sqrt(s);
}

DomainSpec DomainSpec::make(int n, CuspProfile psi) {
  if (n < 2) throw ArgumentError("ambient dimension must be at least 2");
  const bool normalized = 2.0 * psi.at_one() < 1.0;
  return DomainSpec{n, std::move(psi), normalized};
}

std::string_view to_string(RegionLabel label) noexcept {
  switch (label) {
    case RegionLabel::BilipU1: return "U1";
    case RegionLabel::BilipU2: return "U2";
    case RegionLabel::BilipU3: return "U3";
    case RegionLabel::BilipU4: return "U4";
    case RegionLabel::ExtOmega: return "Omega";
    case RegionLabel::ExtAnnulusApsi: return "A_psi";
    case RegionLabel::ExtC1: return "C1";
    case RegionLabel::ExtAnnulusC1: return "A_C1";
    case RegionLabel::ExtC2: return "C2";
    case RegionLabel::Exterior: return "exterior";
  }
  return "?";
}

void require_dimension(const DomainSpec& spec, const DomainPoint& z) {
  if (static_cast<int>(z.dimension()) != spec.n)
    throw ArgumentError("point has dimension " + std::to_string(z.dimension()) +
                        ", domain has dimension " + std::to_string(spec.n));
}

bool contains(const DomainSpec& spec, const DomainPoint& z) {
  require_dimension(spec, z);
  const double r = z.radius();
  if (z.t > 0.0 && z.t <= 1.0 && r < spec.psi(z.t)) return true;
  return z.t >= 1.0 && z.t < 2.0 && r < spec.psi.at_one();
}

RegionLabel classify_bilip_region(const DomainSpec& spec, const DomainPoint& z) {
  require_dimension(spec, z);
  if (!spec.normalized)
    throw StateError("bi-Lipschitz map requires 2 psi(1) < 1; call normalize() first");
  const double p1 = spec.psi.at_one();
  const double r = z.radius();
  const double t = z.t;
  if (t <= 1.0 + p1 && r <= 1.0 + p1 - t) return RegionLabel::BilipU1;
  if (contains(spec, z)) return RegionLabel::BilipU2;
  if (t >= 2.0 && r <= p1) return RegionLabel::BilipU4;
  return RegionLabel::BilipU3;
}

RegionLabel classify_extension_region(const DomainSpec& spec, const DomainPoint& z) {
  require_dimension(spec, z);
  const double p1 = spec.psi.at_one();
  const double r = z.radius();
  const double t = z.t;
  if (t >= 0.0 && t <= 1.0) {
    const double p = t == 0.0 ? spec.psi.value_or_zero(0.0, Side::Right) : spec.psi(t);
    if (r <= p) return RegionLabel::ExtOmega;
    if (t > 0.0 && r < 2.0 * p) return RegionLabel::ExtAnnulusApsi;
  }
  if (t >= 1.0 && t <= 2.0 && r <= p1) return RegionLabel::ExtOmega;
  if (t > 1.0 && t <= 2.0 && r < 2.0 * p1) return RegionLabel::ExtAnnulusC1;
  if (t > 2.0 && t < 3.0 && r < 2.0 * p1) return RegionLabel::ExtC2;
  return RegionLabel::Exterior;
}

Normalization normalize(const DomainSpec& spec) {
  const double p1 = spec.psi.at_one();
  if (!(p1 > 0.0)) throw ArgumentError("normalize: psi(1) must be positive");
  if (p1 <= 0.25) {
    DomainSpec out = spec;
    out.normalized = true;
    return {std::move(out), 1.0};
  }
  const double scale = 1.0 / (4.0 * p1);
  return {DomainSpec::make(spec.n, spec.psi.scaled(scale)), scale};
}

}  // namespace cuspext
