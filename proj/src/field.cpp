#include "cuspext/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cuspext/errors.hpp"

namespace cuspext {

namespace {

std::vector<double> zeros_like(const DomainPoint& z) { return std::vector<double>(z.dimension()); }

}  // namespace

ScalarField linear_combination(double alpha, const ScalarField& u, double beta,
                               const ScalarField& v) {
  ScalarField out;
  out.name = "lincomb(" + u.name + "," + v.name + ")";
  out.value = [=, fu = u.value, fv = v.value](const DomainPoint& z) {
    return alpha * fu(z) + beta * fv(z);
  };
  if (u.gradient && v.gradient) {
    out.gradient = [=, gu = u.gradient, gv = v.gradient](const DomainPoint& z) {
      std::vector<double> a = gu(z);
      const std::vector<double> b = gv(z);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = alpha * a[i] + beta * b[i];
      return a;
    };
  }
  out.smoothness = (u.smoothness == Smoothness::Smooth && v.smoothness == Smoothness::Smooth)
                       ? Smoothness::Smooth
                       : Smoothness::Piecewise;
  out.piece = u.piece ? u.piece : v.piece;
  if (u.seam_distance && v.seam_distance) {
    out.seam_distance = [su = u.seam_distance, sv = v.seam_distance](const DomainPoint& z) {
      return std::min(su(z), sv(z));
    };
  } else {
    out.seam_distance = u.seam_distance ? u.seam_distance : v.seam_distance;
  }
  if (u.sup_norm && v.sup_norm) out.sup_norm = std::abs(alpha) * *u.sup_norm + std::abs(beta) * *v.sup_norm;
  return out;
}

ScalarField zero_field() {
  ScalarField f;
  f.name = "zero";
  f.value = [](const DomainPoint&) { return 0.0; };
  f.gradient = [](const DomainPoint& z) { return zeros_like(z); };
  f.sup_norm = 0.0;
  return f;
}

ScalarField test_function(const std::string& name, const TestFunctionOptions& opts) {
  using std::numbers::pi;
  ScalarField f;
  f.name = name;
  if (name == "constant") {
    f.value = [](const DomainPoint&) { return 1.0; };
    f.gradient = [](const DomainPoint& z) { return zeros_like(z); };
    f.sup_norm = 1.0;
  } else if (name == "coordinate_t") {
    f.value = [](const DomainPoint& z) { return z.t; };
    f.gradient = [](const DomainPoint& z) {
      auto g = zeros_like(z);
      g[0] = 1.0;
      return g;
    };
    f.sup_norm = 2.0;
  } else if (name == "radius_squared") {
    f.value = [](const DomainPoint& z) {
      const double r = z.radius();
      return r * r;
    };
    f.gradient = [](const DomainPoint& z) {
      auto g = zeros_like(z);
      for (std::size_t i = 0; i < z.x.size(); ++i) g[i + 1] = 2.0 * z.x[i];
      return g;
    };
    f.sup_norm = opts.psi_at_one * opts.psi_at_one;
  } else if (name == "sin_cos") {
    f.value = [](const DomainPoint& z) {
      const double x1 = z.x.empty() ? 0.0 : z.x[0];
      return std::sin(pi * z.t) * std::cos(pi * x1);
    };
    f.gradient = [](const DomainPoint& z) {
      auto g = zeros_like(z);
      const double x1 = z.x.empty() ? 0.0 : z.x[0];
      g[0] = pi * std::cos(pi * z.t) * std::cos(pi * x1);
      if (!z.x.empty()) g[1] = -pi * std::sin(pi * z.t) * std::sin(pi * x1);
      return g;
    };
    f.sup_norm = 1.0;
  } else if (name == "capped_power") {
    if (!(opts.gamma > 0.0) || !(opts.delta_cap > 0.0))
      throw ArgumentError("capped_power: gamma and delta_cap must be positive");
    const double gamma = opts.gamma;
    const double d2 = opts.delta_cap * opts.delta_cap;
    f.value = [gamma, d2](const DomainPoint& z) { return std::pow(z.t * z.t + d2, -0.5 * gamma); };
    f.gradient = [gamma, d2](const DomainPoint& z) {
      auto g = zeros_like(z);
      g[0] = -gamma * z.t * std::pow(z.t * z.t + d2, -0.5 * gamma - 1.0);
      return g;
    };
    f.sup_norm = std::pow(opts.delta_cap, -gamma);
  } else {
    throw ArgumentError("unknown test function '" + name + "'");
  }
  return f;
}

std::vector<std::string> test_function_names() {
  return {"constant", "coordinate_t", "radius_squared", "sin_cos", "capped_power"};
}

}  // namespace cuspext
