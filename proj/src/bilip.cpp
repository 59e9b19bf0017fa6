#include "cuspext/bilip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cuspext/errors.hpp"

namespace cuspext {

namespace {

double first_coordinate(RegionLabel region, double c, double t, double r) {
  switch (region) {
    case RegionLabel::BilipU1: return (t + r) / (1.0 + c);
    case RegionLabel::BilipU2: return (t + 2.0 * (r - c)) / (1.0 + r - c);
    case RegionLabel::BilipU3: return t + r - c;
    default: return t;
  }
}

DomainPoint with_t(const DomainPoint& z, double t) { return DomainPoint{t, z.x}; }

void require_normalized(const DomainSpec& spec) {
  if (!spec.normalized)
    throw StateError("bi-Lipschitz map requires 2 psi(1) < 1; call normalize() first");
}

// (t, r) in the meridian half-plane lifted along the unit direction.
DomainPoint lift(double t, double r, const std::vector<double>& direction) {
  DomainPoint z{t, direction};
  for (double& v : z.x) v *= r;
  return z;
}

}  // namespace

DomainPoint forward_map(const DomainSpec& spec, const DomainPoint& z) {
  require_normalized(spec);
  const RegionLabel region = classify_bilip_region(spec, z);
  return with_t(z, first_coordinate(region, spec.psi.at_one(), z.t, z.radius()));
}

DomainPoint inverse_map(const DomainSpec& spec, const DomainPoint& w) {
  require_normalized(spec);
  require_dimension(spec, w);
  const double c = spec.psi.at_one();
  const double r = w.radius();
  const double s = w.t;
  double t = 0.0;
  if (s <= 1.0)
    t = (1.0 + c) * s - r;
  else if (r >= c)
    t = s - r + c;
  else if (s < 2.0)
    t = s * (1.0 + r - c) - 2.0 * (r - c);
  else
    t = s;

  DomainPoint z = with_t(w, t);
  const double scale = std::max(1.0, std::abs(s));
  if (std::abs(forward_map(spec, z).t - s) <= 1e-9 * scale) return z;

  // Bisection on the strictly increasing first coordinate.
  const auto f = [&](double tt) { return forward_map(spec, with_t(w, tt)).t - s; };
  double lo = s - 2.0 - 2.0 * r;
  double hi = s + 2.0 + 2.0 * r;
  for (int k = 0; k < 60 && f(lo) > 0.0; ++k) lo -= (hi - lo);
  for (int k = 0; k < 60 && f(hi) < 0.0; ++k) hi += (hi - lo);
  if (f(lo) > 0.0 || f(hi) < 0.0) throw NumericError("inverse_map: could not bracket preimage");
  for (int k = 0; k < 200 && hi - lo > 1e-15 * scale; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  z.t = 0.5 * (lo + hi);
  if (std::abs(f(z.t)) > 1e-9 * scale)
    throw NumericError("inverse_map: region classification ambiguous beyond tolerance");
  return z;
}

Eigen::MatrixXd forward_jacobian(const DomainSpec& spec, const DomainPoint& z) {
  require_normalized(spec);
  const int n = spec.n;
  const double c = spec.psi.at_one();
  const double r = z.radius();
  const double t = z.t;
  double a = 1.0;
  double b = 0.0;
  switch (classify_bilip_region(spec, z)) {
    case RegionLabel::BilipU1:
      a = b = 1.0 / (1.0 + c);
      break;
    case RegionLabel::BilipU2: {
      const double d = 1.0 + r - c;
      a = 1.0 / d;
      b = (2.0 - t) / (d * d);
      break;
    }
    case RegionLabel::BilipU3:
      a = b = 1.0;
      break;
    default:
      break;
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n);
  j(0, 0) = a;
  if (r > 0.0)
    for (int i = 1; i < n; ++i) j(0, i) = b * z.x[static_cast<std::size_t>(i - 1)] / r;
  return j;
}

double bilip_seam_distance(const DomainSpec& spec, const DomainPoint& z) {
  const double c = spec.psi.at_one();
  const double t = z.t;
  const double r = z.radius();
  double d = std::abs(t + r - (1.0 + c)) / std::sqrt(2.0);
  d = std::min(d, t >= 1.0 ? std::abs(r - c) : std::hypot(t - 1.0, r - c));
  d = std::min(d, r <= c ? std::abs(t - 2.0) : std::hypot(t - 2.0, r - c));
  d = std::min(d, t <= 2.0 ? r : std::hypot(t - 2.0, r));
  return d;
}

Eigen::MatrixXd jacobian_estimate(const DomainSpec& spec, const DomainPoint& z, double h) {
  require_normalized(spec);
  require_dimension(spec, z);
  if (!(h > 0.0)) throw ArgumentError("jacobian_estimate: step must be positive");
  if (bilip_seam_distance(spec, z) <= 2.0 * h)
    throw ArgumentError("jacobian_estimate: point within 2h of a seam; use a smaller h or "
                        "another sample");
  const int n = spec.n;
  Eigen::MatrixXd j(n, n);
  for (int col = 0; col < n; ++col) {
    DomainPoint plus = z;
    DomainPoint minus = z;
    if (col == 0) {
      plus.t += h;
      minus.t -= h;
    } else {
      plus.x[static_cast<std::size_t>(col - 1)] += h;
      minus.x[static_cast<std::size_t>(col - 1)] -= h;
    }
    const DomainPoint fp = forward_map(spec, plus);
    const DomainPoint fm = forward_map(spec, minus);
    j(0, col) = (fp.t - fm.t) / (2.0 * h);
    for (int row = 1; row < n; ++row) {
      const auto k = static_cast<std::size_t>(row - 1);
      j(row, col) = (fp.x[k] - fm.x[k]) / (2.0 * h);
    }
  }
  return j;
}

DomainPoint uniform_point_in_box(int n, const SamplingBox& box, Rng& rng) {
  DomainPoint z;
  z.t = uniform(rng, box.t_min, box.t_max);
  z.x = random_in_ball(rng, static_cast<std::size_t>(n - 1), box.radius);
  return z;
}

DistortionReport distortion_from_pairs(
    const DomainSpec& spec, std::span<const std::pair<DomainPoint, DomainPoint>> pairs) {
  require_normalized(spec);
  constexpr double kStep = 1e-6;
  DistortionReport out;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  double min_sv = std::numeric_limits<double>::infinity();
  double max_sv = 0.0;
  for (const auto& [a, b] : pairs) {
    const double d = distance(a, b);
    if (d == 0.0) continue;
    const double ratio = distance(forward_map(spec, a), forward_map(spec, b)) / d;
    ++out.sample_count;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    if (bilip_seam_distance(spec, a) > 4.0 * kStep) {
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian_estimate(spec, a, kStep));
      const auto& sv = svd.singularValues();
      min_sv = std::min(min_sv, sv.minCoeff());
      max_sv = std::max(max_sv, sv.maxCoeff());
      ++out.jacobian_samples;
    }
  }
  if (out.sample_count > 0) {
    out.min_ratio = min_ratio;
    out.max_ratio = max_ratio;
  }
  if (out.jacobian_samples > 0) {
    out.min_jacobian = min_sv;
    out.max_jacobian = max_sv;
  }
  return out;
}

DistortionReport distortion_sample(const DomainSpec& spec, std::size_t pair_count,
                                   std::uint64_t seed, SamplingBox box) {
  if (pair_count == 0) throw ArgumentError("distortion_sample: pair_count must be positive");
  require_normalized(spec);
  Rng rng(seed);
  std::vector<std::pair<DomainPoint, DomainPoint>> pairs;
  pairs.reserve(pair_count);
  for (std::size_t i = 0; i < pair_count; ++i) {
    DomainPoint a = uniform_point_in_box(spec.n, box, rng);
    if (i % 2 == 0) {
      pairs.emplace_back(std::move(a), uniform_point_in_box(spec.n, box, rng));
      continue;
    }
    const double sep = std::pow(10.0, uniform(rng, -4.0, 0.0));
    const std::vector<double> dir = random_unit_vector(rng, static_cast<std::size_t>(spec.n));
    DomainPoint b = a;
    b.t += sep * dir[0];
    for (std::size_t k = 0; k < b.x.size(); ++k) b.x[k] += sep * dir[k + 1];
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return distortion_from_pairs(spec, pairs);
}

ImageCheck verify_image(const DomainSpec& spec, std::size_t sample_count, std::uint64_t seed,
                        double band, SolverOptions opts) {
  require_normalized(spec);
  const DomainSpec hat = DomainSpec::make(spec.n, lipschitzified(spec.psi, opts));
  const double c = spec.psi.at_one();
  Rng rng(seed);
  ImageCheck out;

  // Sample (t, x) with t uniform in (0, 2) and x uniform in the cross-section.
  const auto sample = [&](const DomainSpec& s, double& section) {
    DomainPoint z;
    do {
      z.t = uniform(rng, 0.0, 2.0);
    } while (z.t <= 0.0);
    section = z.t <= 1.0 ? s.psi(z.t) : c;
    z.x = random_in_ball(rng, static_cast<std::size_t>(s.n - 1), section);
    return z;
  };
  const auto near_boundary = [&](const DomainPoint& z, double section) {
    return z.t < band || 2.0 - z.t < band || section - z.radius() < band;
  };

  const std::size_t forward = sample_count - sample_count / 2;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const bool is_forward = i < forward;
    const DomainSpec& from = is_forward ? spec : hat;
    const DomainSpec& to = is_forward ? hat : spec;
    double section = 0.0;
    const DomainPoint z = sample(from, section);
    if (near_boundary(z, section)) {
      ++out.skipped_band;
      continue;
    }
    const DomainPoint image = is_forward ? forward_map(spec, z) : inverse_map(spec, z);
    (is_forward ? out.checked_forward : out.checked_inverse)++;
    if (!contains(to, image)) {
      out.ok = false;
      out.counterexample = z;
      out.failure = is_forward ? "forward image left the hat domain"
                               : "inverse image left the original domain";
      return out;
    }
  }
  return out;
}

std::vector<SeamModulus> bilip_seam_continuity(const DomainSpec& spec,
                                               std::span<const double> deltas,
                                               std::size_t samples_per_seam, std::uint64_t seed,
                                               double max_modulus, double max_spread) {
  require_normalized(spec);
  if (deltas.empty() || samples_per_seam == 0)
    throw ArgumentError("bilip_seam_continuity: need deltas and samples");
  const double c = spec.psi.at_one();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  struct Seam {
    const char* name;
    // seam point (t, r) from u in [0, 1], and unit normal (nt, nr)
    double (*t_of)(double, double);
    double (*r_of)(double, double);
    double nt, nr;
  };
  const Seam seams[] = {
      {"U1|U2", [](double u, double c) { return 1.0 + c - c * (0.05 + 0.9 * u); },
       [](double u, double c) { return c * (0.05 + 0.9 * u); }, inv_sqrt2, inv_sqrt2},
      {"U1|U3", [](double u, double c) { return 1.0 + c - (1.05 * c + (2.0 - 1.05 * c) * u); },
       [](double u, double c) { return 1.05 * c + (2.0 - 1.05 * c) * u; }, inv_sqrt2, inv_sqrt2},
      {"U2|U3", [](double u, double) { return 1.05 + 0.9 * u; },
       [](double, double c) { return c; }, 0.0, 1.0},
      {"U2|U4", [](double, double) { return 2.0; },
       [](double u, double c) { return c * (0.05 + 0.9 * u); }, 1.0, 0.0},
      {"U3|U4", [](double u, double) { return 2.05 + 1.45 * u; },
       [](double, double c) { return c; }, 0.0, 1.0},
  };

  Rng rng(seed);
  std::vector<SeamModulus> out;
  for (const Seam& seam : seams) {
    SeamModulus m;
    m.seam = seam.name;
    m.deltas.assign(deltas.begin(), deltas.end());
    std::vector<std::pair<double, std::vector<double>>> samples;
    for (std::size_t k = 0; k < samples_per_seam; ++k)
      samples.emplace_back(uniform(rng, 0.0, 1.0),
                           random_unit_vector(rng, static_cast<std::size_t>(spec.n - 1)));
    for (double delta : deltas) {
      double worst = 0.0;
      for (const auto& [u, dir] : samples) {
        const double t = seam.t_of(u, c);
        const double r = seam.r_of(u, c);
        const DomainPoint a = lift(t - 0.5 * delta * seam.nt, r - 0.5 * delta * seam.nr, dir);
        const DomainPoint b = lift(t + 0.5 * delta * seam.nt, r + 0.5 * delta * seam.nr, dir);
        worst = std::max(worst,
                         distance(forward_map(spec, a), forward_map(spec, b)) / distance(a, b));
      }
      m.modulus.push_back(worst);
    }
    const auto [lo, hi] = std::minmax_element(m.modulus.begin(), m.modulus.end());
    m.stable = *hi <= max_modulus && *hi <= max_spread * *lo;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace cuspext
