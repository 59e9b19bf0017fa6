#include "cuspext/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cuspext/errors.hpp"
#include "cuspext/random.hpp"

namespace cuspext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DomainPoint with_radius(const DomainPoint& z, double r_new) {
  DomainPoint w = z;
  const double r = z.radius();
  for (double& xi : w.x) xi *= r_new / r;
  return w;
}

DomainPoint lift(double t, double r, const std::vector<double>& dir) {
  DomainPoint z{t, dir};
  for (double& xi : z.x) xi *= r;
  return z;
}

bool in_closed_annulus(double r, double inner, double slack) {
  return r >= inner * (1.0 - slack) && r <= 2.0 * inner * (1.0 + slack) && r > 0.0;
}

constexpr double kSlack = 1e-12;
constexpr double kModulusFloor = 1e-6;

// Value and gradient of L * (u o R) for the radial reflection about
// |x| = profile, with the profile locally p(t), p'(t) = dp.
struct Branch {
  double value;
  std::vector<double> gradient;
};

Branch radial_branch(const ScalarField& u, const DomainPoint& z, double p, double dp,
                     bool want_gradient) {
  const double r = z.radius();
  const double rho = 1.5 * p - 0.5 * r;
  const DomainPoint w = with_radius(z, rho);
  const double L = 2.0 - r / p;
  Branch b{L * u(w), {}};
  if (!want_gradient) return b;
  const std::vector<double> g = u.gradient(w);
  const std::size_t m = z.x.size();
  double radial = 0.0;  // xhat . g_x
  for (std::size_t i = 0; i < m; ++i) radial += z.x[i] / r * g[i + 1];
  const double uw = u(w);
  b.gradient.assign(m + 1, 0.0);
  // d/dt: u * dL/dt + L * (g_t + 3/2 p' (xhat . g_x))
  b.gradient[0] = uw * r * dp / (p * p) + L * (g[0] + 1.5 * dp * radial);
  for (std::size_t i = 0; i < m; ++i) {
    const double xhat = z.x[i] / r;
    const double tangential = g[i + 1] - radial * xhat;
    const double dr_term = -0.5 * radial * xhat + rho / r * tangential;
    b.gradient[i + 1] = uw * (-xhat / p) + L * dr_term;
  }
  return b;
}

}  // namespace

std::string_view to_string(SecondCylinderMap m) noexcept {
  switch (m) {
    case SecondCylinderMap::Reflect: return "reflect";
    case SecondCylinderMap::Shift1: return "shift1";
    case SecondCylinderMap::Shift2: return "shift2";
  }
  return "?";
}

SecondCylinderMap parse_second_cylinder_map(std::string_view name) {
  if (name == "reflect") return SecondCylinderMap::Reflect;
  if (name == "shift1") return SecondCylinderMap::Shift1;
  if (name == "shift2") return SecondCylinderMap::Shift2;
  throw ConfigError("unknown second_cylinder_map '" + std::string(name) +
                    "' (expected reflect, shift1 or shift2)");
}

ExtensionContext::ExtensionContext(DomainSpec spec, SecondCylinderMap m)
    : spec_(std::move(spec)),
      psi1_(spec_.psi.at_one()),
      lipschitz_(*spec_.psi.lipschitz_constant()),
      second_map_(m) {}

ExtensionContext ExtensionContext::make(DomainSpec spec, SecondCylinderMap second_map) {
  if (!spec.psi.lipschitz_constant())
    throw ArgumentError("extension: profile '" + spec.psi.name() +
                        "' has no Lipschitz constant; use extend_general");
  return ExtensionContext(std::move(spec), second_map);
}

DomainPoint reflect_cusp(const ExtensionContext& ctx, const DomainPoint& z) {
  require_dimension(ctx.spec(), z);
  if (!(z.t > 0.0 && z.t <= 1.0)) throw DomainError("reflect_cusp: t outside (0, 1]");
  const double p = ctx.spec().psi(z.t);
  const double r = z.radius();
  if (!in_closed_annulus(r, p, kSlack)) throw DomainError("reflect_cusp: |x| outside [psi, 2 psi]");
  return with_radius(z, 1.5 * p - 0.5 * r);
}

double cutoff_L(const ExtensionContext& ctx, const DomainPoint& z) {
  require_dimension(ctx.spec(), z);
  if (!(z.t > 0.0 && z.t <= 1.0)) throw DomainError("cutoff_L: t outside (0, 1]");
  const double p = ctx.spec().psi(z.t);
  const double r = z.radius();
  if (!in_closed_annulus(r, p, kSlack)) throw DomainError("cutoff_L: |x| outside [psi, 2 psi]");
  return 2.0 - r / p;
}

DomainPoint reflect_annulus1(const ExtensionContext& ctx, const DomainPoint& z) {
  require_dimension(ctx.spec(), z);
  if (!(z.t >= 1.0 && z.t <= 2.0)) throw DomainError("reflect_annulus1: t outside [1, 2]");
  const double c = ctx.psi_at_one();
  const double r = z.radius();
  if (!in_closed_annulus(r, c, kSlack))
    throw DomainError("reflect_annulus1: |x| outside [psi(1), 2 psi(1)]");
  return with_radius(z, 1.5 * c - 0.5 * r);
}

double cutoff_L1(const ExtensionContext& ctx, const DomainPoint& z) {
  require_dimension(ctx.spec(), z);
  if (!(z.t >= 1.0 && z.t <= 2.0)) throw DomainError("cutoff_L1: t outside [1, 2]");
  const double c = ctx.psi_at_one();
  const double r = z.radius();
  if (!in_closed_annulus(r, c, kSlack))
    throw DomainError("cutoff_L1: |x| outside [psi(1), 2 psi(1)]");
  return 2.0 - r / c;
}

DomainPoint reflect_shift2(const ExtensionContext& ctx, const DomainPoint& z) {
  require_dimension(ctx.spec(), z);
  if (!(z.t >= 2.0 && z.t <= 3.0) || z.radius() > ctx.cylinder_radius() * (1.0 + kSlack))
    throw DomainError("reflect_shift2: point outside [2, 3] x B(0, 2 psi(1))");
  DomainPoint w = z;
  switch (ctx.second_map()) {
    case SecondCylinderMap::Reflect: w.t = 4.0 - z.t; break;
    case SecondCylinderMap::Shift1: w.t = z.t - 1.0; break;
    case SecondCylinderMap::Shift2: w.t = z.t - 2.0; break;
  }
  return w;
}

double cutoff_L2(const ExtensionContext& ctx, const DomainPoint& z) {
  require_dimension(ctx.spec(), z);
  if (!(z.t >= 2.0 && z.t <= 3.0) || z.radius() > ctx.cylinder_radius() * (1.0 + kSlack))
    throw DomainError("cutoff_L2: point outside [2, 3] x B(0, 2 psi(1))");
  return 3.0 - z.t;
}

namespace {

// The extension restricted to t <= 2 (no far-cylinder branch).
Branch near_branches(const ExtensionContext& ctx, const ScalarField& u, const DomainPoint& z,
                     RegionLabel label, bool want_gradient) {
  const std::size_t n = z.dimension();
  switch (label) {
    case RegionLabel::ExtOmega:
    case RegionLabel::ExtC1:
      return {u(z), want_gradient ? u.gradient(z) : std::vector<double>{}};
    case RegionLabel::ExtAnnulusApsi: {
      const auto& psi = ctx.spec().psi;
      return radial_branch(u, z, psi(z.t), want_gradient ? psi.derivative(z.t) : 0.0,
                           want_gradient);
    }
    case RegionLabel::ExtAnnulusC1:
      return radial_branch(u, z, ctx.psi_at_one(), 0.0, want_gradient);
    case RegionLabel::Exterior:
      return {0.0, want_gradient ? std::vector<double>(n, 0.0) : std::vector<double>{}};
    default:
      throw StateError("extension: folded point landed in region " +
                       std::string(to_string(label)));
  }
}

Branch evaluate_extension(const ExtensionContext& ctx, const ScalarField& u, const DomainPoint& z,
                          bool want_gradient) {
  require_dimension(ctx.spec(), z);
  const RegionLabel label = classify_extension_region(ctx.spec(), z);
  if (label != RegionLabel::ExtC2) return near_branches(ctx, u, z, label, want_gradient);

  const DomainPoint w = reflect_shift2(ctx, z);
  const double L2 = 3.0 - z.t;
  const Branch inner =
      near_branches(ctx, u, w, classify_extension_region(ctx.spec(), w), want_gradient);
  Branch b{L2 * inner.value, {}};
  if (!want_gradient) return b;
  const double dw_dt = ctx.second_map() == SecondCylinderMap::Reflect ? -1.0 : 1.0;
  b.gradient = inner.gradient;
  b.gradient[0] = -inner.value + L2 * dw_dt * inner.gradient[0];
  for (std::size_t i = 1; i < b.gradient.size(); ++i) b.gradient[i] *= L2;
  return b;
}

}  // namespace

double extension_seam_distance(const ExtensionContext& ctx, const DomainPoint& z) {
  const auto& psi = ctx.spec().psi;
  const double c = ctx.psi_at_one();
  const double r = z.radius();
  double d = std::min({std::abs(z.t), std::abs(z.t - 1.0), std::abs(z.t - 2.0),
                       std::abs(z.t - 3.0)});
  if (z.t > 0.0 && z.t <= 1.0) {
    const double p = psi(z.t);
    const double slope = ctx.lipschitz_constant();
    d = std::min(d, std::abs(r - p) / std::sqrt(1.0 + slope * slope));
    d = std::min(d, std::abs(r - 2.0 * p) / std::sqrt(1.0 + 4.0 * slope * slope));
    // the annulus cut-off also depends on |x|, which is singular on the axis
    d = std::min(d, r);
  }
  if (z.t >= 1.0 && z.t <= 3.0) {
    d = std::min({d, std::abs(r - c), std::abs(r - 2.0 * c)});
  }
  return d;
}

ScalarField extend_lipschitz(const ExtensionContext& ctx, const ScalarField& u) {
  if (!u.value) throw ArgumentError("extend_lipschitz: field has no value function");
  ScalarField e;
  e.name = "E(" + u.name + ")";
  e.value = [ctx, u](const DomainPoint& z) { return evaluate_extension(ctx, u, z, false).value; };
  if (u.gradient) {
    e.gradient = [ctx, u](const DomainPoint& z) {
      return evaluate_extension(ctx, u, z, true).gradient;
    };
  }
  e.smoothness = Smoothness::Piecewise;
  e.piece = [ctx](const DomainPoint& z) {
    return static_cast<int>(classify_extension_region(ctx.spec(), z));
  };
  e.seam_distance = [ctx](const DomainPoint& z) { return extension_seam_distance(ctx, z); };
  if (u.sup_norm) e.sup_norm = *u.sup_norm;
  return e;
}

ScalarField extend_general(const DomainSpec& spec, const ScalarField& u, SolverOptions opts,
                           SecondCylinderMap second_map) {
  if (!u.value) throw ArgumentError("extend_general: field has no value function");
  const Normalization norm = normalize(spec);
  const double k = norm.scale;
  const DomainSpec scaled = norm.spec;
  const DomainSpec hat_spec = DomainSpec::make(spec.n, lipschitzified(scaled.psi, opts));
  const ExtensionContext ctx = ExtensionContext::make(hat_spec, second_map);

  const auto scale_x = [](DomainPoint z, double f) {
    for (double& xi : z.x) xi *= f;
    return z;
  };

  // u transported to the lipschitzified domain: v = u o S^-1 o O^-1
  ScalarField v;
  v.name = u.name;
  v.value = [=](const DomainPoint& w) {
    return u(scale_x(inverse_map(scaled, w), 1.0 / k));
  };
  if (u.gradient) {
    v.gradient = [=](const DomainPoint& w) {
      const DomainPoint zeta = inverse_map(scaled, w);
      std::vector<double> g = u.gradient(scale_x(zeta, 1.0 / k));
      for (std::size_t i = 1; i < g.size(); ++i) g[i] /= k;
      const Eigen::MatrixXd J = forward_jacobian(scaled, zeta);
      // grad v = J^-T g
      const Eigen::VectorXd gv = J.transpose().fullPivLu().solve(
          Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size())));
      return std::vector<double>(gv.data(), gv.data() + gv.size());
    };
  }
  const ScalarField ev = extend_lipschitz(ctx, v);

  ScalarField e;
  e.name = "Egen(" + u.name + ")";
  e.value = [=](const DomainPoint& z) {
    require_dimension(spec, z);
    return ev(forward_map(scaled, scale_x(z, k)));
  };
  if (ev.gradient) {
    e.gradient = [=](const DomainPoint& z) {
      require_dimension(spec, z);
      const DomainPoint s = scale_x(z, k);
      const std::vector<double> h = ev.gradient(forward_map(scaled, s));
      const Eigen::MatrixXd J = forward_jacobian(scaled, s);
      Eigen::VectorXd g = J.transpose() *
                          Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
      for (Eigen::Index i = 1; i < g.size(); ++i) g[i] *= k;
      return std::vector<double>(g.data(), g.data() + g.size());
    };
  }
  e.smoothness = Smoothness::Piecewise;
  e.piece = [=](const DomainPoint& z) {
    const DomainPoint s = scale_x(z, k);
    return 16 * static_cast<int>(classify_bilip_region(scaled, s)) +
           static_cast<int>(classify_extension_region(ctx.spec(), forward_map(scaled, s)));
  };
  e.seam_distance = [=](const DomainPoint& z) {
    const DomainPoint s = scale_x(z, k);
    // O is at most 2-Lipschitz in each direction, so this stays conservative
    const double through_map = 0.5 * extension_seam_distance(ctx, forward_map(scaled, s));
    return std::min(bilip_seam_distance(scaled, s), through_map) / std::max(1.0, k);
  };
  if (u.sup_norm) e.sup_norm = *u.sup_norm;
  return e;
}

std::vector<SeamModulus> extension_seam_continuity(const ExtensionContext& ctx,
                                                   const ScalarField& extended,
                                                   std::span<const double> deltas,
                                                   std::size_t samples_per_seam,
                                                   std::uint64_t seed, double max_spread) {
  if (deltas.empty() || samples_per_seam == 0)
    throw ArgumentError("extension_seam_continuity: need deltas and samples");
  const auto& psi = ctx.spec().psi;
  const double c = ctx.psi_at_one();

  struct Point {
    double t, r, nt, nr;
  };
  struct Seam {
    std::string name;
    std::function<Point(double)> at;  // u in [0, 1] -> seam point and unit normal
  };
  const auto graph_seam = [&psi](double factor) {
    return [&psi, factor](double u) {
      const double t = 0.2 + 0.75 * u;
      const double slope = factor * psi.derivative(t);
      const double norm = std::hypot(slope, 1.0);
      return Point{t, factor * psi(t), -slope / norm, 1.0 / norm};
    };
  };
  const std::vector<Seam> seams = {
      {"|x|=psi", graph_seam(1.0)},
      {"|x|=2psi", graph_seam(2.0)},
      {"t=1 annulus", [c](double u) { return Point{1.0, c * (1.05 + 0.9 * u), 1.0, 0.0}; }},
      {"|x|=psi(1), 1<t<2", [c](double u) { return Point{1.05 + 0.9 * u, c, 0.0, 1.0}; }},
      {"|x|=2psi(1), 1<t<2", [c](double u) { return Point{1.05 + 0.9 * u, 2.0 * c, 0.0, 1.0}; }},
      {"t=2 core", [c](double u) { return Point{2.0, c * 0.95 * u, 1.0, 0.0}; }},
      {"t=2 annulus", [c](double u) { return Point{2.0, c * (1.05 + 0.9 * u), 1.0, 0.0}; }},
      {"|x|=psi(1), 2<t<3", [c](double u) { return Point{2.05 + 0.9 * u, c, 0.0, 1.0}; }},
      {"|x|=2psi(1), 2<t<3", [c](double u) { return Point{2.05 + 0.9 * u, 2.0 * c, 0.0, 1.0}; }},
      {"t=3", [c](double u) { return Point{3.0, c * 1.95 * u, 1.0, 0.0}; }},
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
                           random_unit_vector(rng, static_cast<std::size_t>(ctx.spec().n - 1)));
    for (double delta : deltas) {
      double worst = 0.0;
      for (const auto& [u, dir] : samples) {
        const Point p = seam.at(u);
        const DomainPoint a = lift(p.t - 0.5 * delta * p.nt, p.r - 0.5 * delta * p.nr, dir);
        const DomainPoint b = lift(p.t + 0.5 * delta * p.nt, p.r + 0.5 * delta * p.nr, dir);
        worst = std::max(worst, std::abs(extended(a) - extended(b)) / delta);
      }
      m.modulus.push_back(worst);
    }
    // bounded modulus: a jump makes it grow like 1/delta, while matching
    // one-sided derivatives can make it shrink, which is still continuous
    const auto coarsest = std::max_element(m.deltas.begin(), m.deltas.end()) - m.deltas.begin();
    const double reference = m.modulus[static_cast<std::size_t>(coarsest)];
    const double hi = *std::max_element(m.modulus.begin(), m.modulus.end());
    m.stable = std::isfinite(hi) && hi <= max_spread * reference + kModulusFloor;
    out.push_back(std::move(m));
  }
  return out;
}

BoundaryDecay boundary_decay(const ExtensionContext& ctx, const ScalarField& u,
                             const ScalarField& extended, std::size_t normals,
                             std::span<const double> deltas, std::uint64_t seed) {
  if (!u.sup_norm) throw ArgumentError("boundary_decay: field has no sup-norm bound");
  if (deltas.empty() || normals == 0) throw ArgumentError("boundary_decay: need deltas and normals");
  const auto& psi = ctx.spec().psi;
  const double c = ctx.psi_at_one();
  const double sup = *u.sup_norm;
  Rng rng(seed);
  BoundaryDecay out;
  for (std::size_t k = 0; k < normals; ++k) {
    const auto dir = random_unit_vector(rng, static_cast<std::size_t>(ctx.spec().n - 1));
    const double pick = uniform(rng, 0.0, 1.0);
    // boundary point (t, r) and inward axis-aligned step
    double t = 0.0, r = 0.0, nt = 0.0, nr = 0.0;
    if (pick < 0.4) {
      t = uniform(rng, 0.05, 1.0);
      r = 2.0 * psi(t);
      nr = -1.0;
    } else if (pick < 0.8) {
      t = uniform(rng, 1.0, 3.0);
      r = 2.0 * c;
      nr = -1.0;
    } else {
      t = 3.0;
      r = uniform(rng, 0.0, 1.95) * c;
      nt = -1.0;
    }
    const double bound = sup / std::min(1.0, psi(std::min(t, 1.0)));
    for (double delta : deltas) {
      const DomainPoint z = lift(t + delta * nt, r + delta * nr, dir);
      const double ratio = bound > 0.0 ? std::abs(extended(z)) / (bound * delta)
                                       : (extended(z) == 0.0 ? 0.0 : kInf);
      if (ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_point = z;
      }
    }
    ++out.normals;
  }
  out.ok = out.worst_ratio <= 1.0 + 1e-9;
  return out;
}

}  // namespace cuspext
