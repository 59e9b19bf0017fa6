#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cuspext/geometry.hpp"

namespace cuspext {

enum class Smoothness { Smooth, Piecewise };

/// A pointwise-evaluable function u(z) on R^n or a subset of it.
/// Gradients are ordered (d/dt, d/dx_1, ..., d/dx_{n-1}).
struct ScalarField {
  std::string name;
  std::function<double(const DomainPoint&)> value;
  /// Analytic gradient; empty if unavailable.
  std::function<std::vector<double>(const DomainPoint&)> gradient;
  Smoothness smoothness = Smoothness::Smooth;
  /// Region label of piecewise fields; finite differences never straddle a
  /// change of label.
  std::function<int(const DomainPoint&)> piece;
  /// Distance to the nearest seam of a piecewise field (infinite if absent).
  std::function<double(const DomainPoint&)> seam_distance;
  /// Upper bound on |u| over the closure of the domain, if known.
  std::optional<double> sup_norm;

  double operator()(const DomainPoint& z) const { return value(z); }
  bool has_gradient() const noexcept { return static_cast<bool>(gradient); }
};

/// alpha * u + beta * v, with gradient when both have one.
ScalarField linear_combination(double alpha, const ScalarField& u, double beta,
                               const ScalarField& v);

/// Library of smooth test functions, selectable by name:
///   "constant"          u = 1
///   "coordinate_t"      u = t
///   "radius_squared"    u = |x|^2
///   "sin_cos"           u = sin(pi t) cos(pi x_1)
///   "capped_power"      u = (t^2 + delta_cap^2)^(-gamma/2), a smooth cap of t^-gamma
struct TestFunctionOptions {
  double gamma = 0.25;
  double delta_cap = 1e-3;
  /// psi(1) of the target domain, used for the sup-norm of |x|^2.
  double psi_at_one = 1.0;
};

ScalarField test_function(const std::string& name, const TestFunctionOptions& opts = {});
std::vector<std::string> test_function_names();

/// Returns the identically zero field.
ScalarField zero_field();

}  // namespace cuspext
