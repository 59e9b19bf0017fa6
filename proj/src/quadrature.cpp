#include "cuspext/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cuspext/errors.hpp"
#include "cuspext/random.hpp"

namespace cuspext {

namespace {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

double sphere_measure(int dim_ambient) {
  // surface measure of S^{d-1} in R^d
  const double d = dim_ambient;
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

struct Direction {
  std::vector<double> unit;
  double weight;
};

std::vector<Direction> directions(int n, const QuadratureScheme& scheme) {
  const auto& o = scheme.options();
  const int scale = 1 << scheme.refinement_level();
  std::vector<Direction> dirs;
  if (n == 2) {
    dirs.push_back({{1.0}, 1.0});
    dirs.push_back({{-1.0}, 1.0});
  } else if (n == 3) {
    const int m = o.angular_nodes * scale;
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * std::numbers::pi * (j + 0.5) / m;
      dirs.push_back({{std::cos(a), std::sin(a)}, 2.0 * std::numbers::pi / m});
    }
  } else {
    const int m = o.mc_directions * scale;
    Rng rng(o.seed + static_cast<std::uint64_t>(scheme.refinement_level()));
    const double w = sphere_measure(n - 1) / m;
    for (int j = 0; j < m; ++j)
      dirs.push_back({random_unit_vector(rng, static_cast<std::size_t>(n - 1)), w});
  }
  return dirs;
}

std::vector<double> panel_edges(const RadialPiece& piece, const std::vector<double>& breaks,
                                const QuadratureScheme& scheme) {
  const auto& o = scheme.options();
  std::vector<double> edges{piece.t_begin, piece.t_end};
  if (piece.graded) {
    double e = 1.0;
    for (int k = 0; k <= o.grading_levels; ++k, e *= o.grading_ratio)
      if (e > piece.t_begin && e < piece.t_end) edges.push_back(e);
  } else {
    const int count =
        std::max(1, static_cast<int>(std::lround(o.cylinder_panels * (piece.t_end - piece.t_begin))));
    for (int k = 1; k < count; ++k)
      edges.push_back(piece.t_begin + (piece.t_end - piece.t_begin) * k / count);
  }
  for (double b : breaks)
    if (b > piece.t_begin && b < piece.t_end) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const int split = 1 << scheme.refinement_level();
  std::vector<double> fine;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    for (int k = 0; k < split; ++k) fine.push_back(edges[i] + (edges[i + 1] - edges[i]) * k / split);
  fine.push_back(edges.back());
  return fine;
}

// Visits every node; visit(z, weight, local_radius) returns the weighted
// contribution. Slice totals are summed pairwise, then pieces in order.
template <class Visit>
Integral traverse(const IntegrationRegion& region, const QuadratureScheme& scheme, Visit&& visit,
                  bool keep_slices) {
  if (region.n < 2) throw ArgumentError("integration region: n must be >= 2");
  const auto& o = scheme.options();
  const GaussRule t_rule = gauss_legendre(o.t_order);
  const GaussRule r_rule = gauss_legendre(o.radial_order);
  const std::vector<Direction> dirs = directions(region.n, scheme);
  const int radial_panels = 1 << scheme.refinement_level();

  Integral out;
  std::vector<double> piece_totals;
  std::vector<double> slice_totals;
  std::vector<double> node_values;
  DomainPoint z{0.0, std::vector<double>(static_cast<std::size_t>(region.n - 1))};
  for (const RadialPiece& piece : region.pieces) {
    const std::vector<double> edges = panel_edges(piece, region.breaks, scheme);
    slice_totals.clear();
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double ta = edges[e], tb = edges[e + 1];
      for (std::size_t i = 0; i < t_rule.nodes.size(); ++i) {
        const double t = 0.5 * (ta + tb) + 0.5 * (tb - ta) * t_rule.nodes[i];
        const double wt = 0.5 * (tb - ta) * t_rule.weights[i];
        const double ra = piece.inner(t), rb = piece.outer(t);
        node_values.clear();
        double measure = 0.0;
        if (rb > ra) {
          for (int rp = 0; rp < radial_panels; ++rp) {
            const double pa = ra + (rb - ra) * rp / radial_panels;
            const double pb = ra + (rb - ra) * (rp + 1) / radial_panels;
            for (std::size_t j = 0; j < r_rule.nodes.size(); ++j) {
              const double rho = 0.5 * (pa + pb) + 0.5 * (pb - pa) * r_rule.nodes[j];
              const double wr = 0.5 * (pb - pa) * r_rule.weights[j] * std::pow(rho, region.n - 2);
              for (const Direction& d : dirs) {
                z.t = t;
                for (std::size_t k = 0; k < z.x.size(); ++k) z.x[k] = rho * d.unit[k];
                const double w = wt * wr * d.weight;
                measure += w;
                node_values.push_back(w * visit(z, rb));
                ++out.nodes;
              }
            }
          }
        }
        const double slice = pairwise_sum(node_values);
        slice_totals.push_back(slice);
        if (keep_slices) out.slices.push_back({piece.label, t, measure, slice});
      }
    }
    piece_totals.push_back(pairwise_sum(slice_totals));
  }
  out.value = pairwise_sum(piece_totals);
  return out;
}

[[noreturn]] void non_finite(const DomainPoint& z, double v) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "non-finite integrand " << v << " at node t=" << z.t << " |x|=" << z.radius();
  throw NumericError(msg.str());
}

void require_p(double p, const char* what) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw ArgumentError(std::string(what) + ": exponent must lie in [1, inf)");
}

}  // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1) throw ArgumentError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (order == 1) p0 = 1.0;
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (order % 2 == 1) rule.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return rule;
}

QuadratureScheme::QuadratureScheme(QuadratureOptions opts) : opts_(opts) {
  if (!(opts_.grading_ratio > 0.0 && opts_.grading_ratio < 1.0))
    throw ConfigError("quadrature.grading_ratio: must lie in (0, 1)");
  if (opts_.grading_levels < 0 || opts_.grading_levels > 200)
    throw ConfigError("quadrature.grading_levels: must lie in [0, 200]");
  if (opts_.t_order < 1 || opts_.radial_order < 1)
    throw ConfigError("quadrature.t_order/radial_order: must be >= 1");
  if (opts_.cylinder_panels < 1) throw ConfigError("quadrature.cylinder_panels: must be >= 1");
  if (opts_.angular_nodes < 1) throw ConfigError("quadrature.angular_nodes: must be >= 1");
  if (opts_.mc_directions < 1) throw ConfigError("quadrature.mc_directions: must be >= 1");
  if (!(opts_.seam_band >= 0.0)) throw ConfigError("quadrature.seam_band: must be >= 0");
}

QuadratureScheme QuadratureScheme::refined() const {
  QuadratureScheme s = *this;
  ++s.level_;
  return s;
}

std::string QuadratureScheme::describe() const {
  std::ostringstream s;
  s << "graded(ratio=" << opts_.grading_ratio << ",levels=" << opts_.grading_levels
    << ") t_order=" << opts_.t_order << " radial_order=" << opts_.radial_order
    << " cylinder_panels=" << opts_.cylinder_panels << " angular=" << opts_.angular_nodes
    << " mc=" << opts_.mc_directions << " refinement=" << level_;
  return s.str();
}

IntegrationRegion IntegrationRegion::domain(const DomainSpec& spec) {
  const CuspProfile psi = spec.psi;
  const double c = psi.at_one();
  const auto zero = [](double) { return 0.0; };
  IntegrationRegion r;
  r.n = spec.n;
  r.pieces.push_back({"cusp", 0.0, 1.0, zero, [psi](double t) { return psi(t); }, true});
  r.pieces.push_back({"cylinder", 1.0, 2.0, zero, [c](double) { return c; }, false});
  const auto bp = psi.breakpoints();
  r.breaks.assign(bp.begin(), bp.end());
  for (double j : psi.jump_points()) r.breaks.push_back(j);
  return r;
}

IntegrationRegion IntegrationRegion::extension_support(const DomainSpec& spec) {
  const CuspProfile psi = spec.psi;
  const double c = psi.at_one();
  const auto zero = [](double) { return 0.0; };
  const auto p1 = [psi](double t) { return psi(t); };
  const auto p2 = [psi](double t) { return 2.0 * psi(t); };
  const auto c1 = [c](double) { return c; };
  const auto c2 = [c](double) { return 2.0 * c; };
  IntegrationRegion r;
  r.n = spec.n;
  r.pieces.push_back({"cusp", 0.0, 1.0, zero, p1, true});
  r.pieces.push_back({"annulus", 0.0, 1.0, p1, p2, true});
  r.pieces.push_back({"cylinder1", 1.0, 2.0, zero, c1, false});
  r.pieces.push_back({"annulus1", 1.0, 2.0, c1, c2, false});
  r.pieces.push_back({"cylinder2", 2.0, 3.0, zero, c1, false});
  r.pieces.push_back({"annulus2", 2.0, 3.0, c1, c2, false});
  const auto bp = psi.breakpoints();
  r.breaks.assign(bp.begin(), bp.end());
  for (double j : psi.jump_points()) r.breaks.push_back(j);
  return r;
}

IntegrationRegion IntegrationRegion::cylinder(int n, double t_begin, double t_end, double radius) {
  if (!(t_end > t_begin) || !(radius > 0.0))
    throw ArgumentError("cylinder region: need t_end > t_begin and radius > 0");
  IntegrationRegion r;
  r.n = n;
  r.pieces.push_back({"cylinder", t_begin, t_end, [](double) { return 0.0; },
                      [radius](double) { return radius; }, false});
  return r;
}

Integral integrate(const IntegrationRegion& region, const QuadratureScheme& scheme,
                   const std::function<double(const DomainPoint&)>& f, bool keep_slices) {
  return traverse(
      region, scheme,
      [&f](const DomainPoint& z, double) {
        const double v = f(z);
        if (!std::isfinite(v)) non_finite(z, v);
        return v;
      },
      keep_slices);
}

double lp_norm(const ScalarField& u, const IntegrationRegion& region, double p,
               const QuadratureScheme& scheme) {
  require_p(p, "lp_norm");
  const Integral I = integrate(
      region, scheme,
      [&u, p](const DomainPoint& z) {
        const double v = u(z);
        if (!std::isfinite(v)) non_finite(z, v);
        return std::pow(std::abs(v), p);
      });
  return std::pow(I.value, 1.0 / p);
}

std::vector<double> gradient(const ScalarField& u, const DomainPoint& z,
                             const QuadratureScheme&) {
  if (u.gradient) return u.gradient(z);
  double h = 1e-6;
  if (u.seam_distance) {
    const double sd = u.seam_distance(z);
    if (!(sd > 0.0))
      throw DomainError("gradient: point lies on a seam; exclude a tolerance band around seams");
    h = std::min(h, sd / 4.0);
  }
  const int label = u.piece ? u.piece(z) : 0;
  const auto same_piece = [&](const DomainPoint& w) { return !u.piece || u.piece(w) == label; };
  std::vector<double> g(z.dimension());
  const double center = u(z);
  for (std::size_t i = 0; i < g.size(); ++i) {
    DomainPoint a = z, b = z;
    if (i == 0) {
      a.t += h;
      b.t -= h;
    } else {
      a.x[i - 1] += h;
      b.x[i - 1] -= h;
    }
    const bool fa = same_piece(a), fb = same_piece(b);
    if (fa && fb) {
      g[i] = (u(a) - u(b)) / (2.0 * h);
    } else if (fa) {
      g[i] = (u(a) - center) / h;
    } else if (fb) {
      g[i] = (center - u(b)) / h;
    } else {
      throw DomainError("gradient: stencil leaves the piece on both sides; exclude a seam band");
    }
  }
  return g;
}

SobolevNorm w1p_norm_detail(const ScalarField& u, const IntegrationRegion& region, double p,
                            const QuadratureScheme& scheme) {
  require_p(p, "w1p_norm");
  const double band = scheme.options().seam_band;
  SobolevNorm out;
  std::size_t excluded = 0;
  // two passes share the traversal order, so results stay reproducible
  const Integral value_part = integrate(region, scheme, [&u, p](const DomainPoint& z) {
    const double v = u(z);
    if (!std::isfinite(v)) non_finite(z, v);
    return std::pow(std::abs(v), p);
  });
  const Integral grad_part = traverse(
      region, scheme,
      [&](const DomainPoint& z, double local_radius) {
        if (u.seam_distance && u.seam_distance(z) < band * local_radius) {
          ++excluded;
          return 0.0;
        }
        const std::vector<double> g = gradient(u, z, scheme);
        double s = 0.0;
        for (double gi : g) s += gi * gi;
        if (!std::isfinite(s)) non_finite(z, s);
        return std::pow(s, 0.5 * p);
      },
      false);
  out.lp = std::pow(value_part.value, 1.0 / p);
  out.gradient_lp = std::pow(grad_part.value, 1.0 / p);
  out.total = out.lp + out.gradient_lp;
  out.nodes = value_part.nodes;
  out.excluded_nodes = excluded;
  return out;
}

double w1p_norm(const ScalarField& u, const IntegrationRegion& region, double p,
                const QuadratureScheme& scheme) {
  return w1p_norm_detail(u, region, p, scheme).total;
}

NormReport extension_ratio(const ScalarField& u, const DomainSpec& spec, double p, double q,
                           const QuadratureScheme& scheme, SecondCylinderMap second_map) {
  require_p(q, "extension_ratio");
  require_p(p, "extension_ratio");
  if (q > p) throw ArgumentError("extension_ratio: need q <= p");
  const ExtensionContext ctx = ExtensionContext::make(spec, second_map);
  const ScalarField eu = extend_lipschitz(ctx, u);
  const IntegrationRegion omega = IntegrationRegion::domain(spec);
  const IntegrationRegion support = IntegrationRegion::extension_support(spec);

  NormReport rep;
  rep.field = u.name;
  rep.profile = spec.psi.name();
  rep.n = spec.n;
  rep.p = p;
  rep.q = q;
  rep.resolution = scheme.describe();

  const SobolevNorm nu = w1p_norm_detail(u, omega, p, scheme);
  const SobolevNorm ne = w1p_norm_detail(eu, support, q, scheme);
  rep.norm_u_W1p = nu.total;
  rep.norm_Eu_W1q = ne.total;
  rep.nodes = nu.nodes + ne.nodes;
  rep.excluded_nodes = nu.excluded_nodes + ne.excluded_nodes;
  if (!(nu.total > 0.0)) {
    rep.zero_denominator = true;
    return rep;
  }
  rep.ratio = ne.total / nu.total;

  const QuadratureScheme fine = scheme.refined();
  const double fu = w1p_norm(u, omega, p, fine);
  const double fe = w1p_norm(eu, support, q, fine);
  if (fu > 0.0) {
    rep.refined_ratio = fe / fu;
    rep.refinement_delta = std::abs(*rep.refined_ratio - *rep.ratio) / *rep.ratio;
  }
  return rep;
}

void write_slice_csv(std::ostream& out, const std::vector<SliceContribution>& slices) {
  out.precision(17);
  out << "piece,t,measure,value\n";
  for (const auto& s : slices) out << s.piece << ',' << s.t << ',' << s.measure << ',' << s.value << '\n';
}

}  // namespace cuspext
