#include "cuspext/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cuspext/errors.hpp"

namespace cuspext {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void validate_table(std::span<const double> breakpoints, std::span<const double> values,
                    std::size_t row_offset) {
  if (breakpoints.empty()) throw ConfigError("profile table is empty");
  if (breakpoints.size() != values.size())
    throw ConfigError("profile table: breakpoint and value counts differ");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double t = breakpoints[i];
    const double v = values[i];
    const std::string row = "row " + std::to_string(i + row_offset) + ": ";
    if (!std::isfinite(t) || t <= 0.0 || t > 1.0)
      throw ConfigError(row + "breakpoint " + format_number(t) + " outside (0, 1]");
    if (!std::isfinite(v) || v <= 0.0)
      throw ConfigError(row + "value " + format_number(v) + " is not strictly positive");
    if (i > 0 && t <= breakpoints[i - 1])
      throw ConfigError(row + "breakpoints must be strictly ascending");
    if (i > 0 && v < values[i - 1])
      throw ConfigError(row + "values must be nondecreasing");
  }
}

CuspProfile::CuspProfile(ProfileKind kind, std::string name, Data data)
    : kind_(kind), name_(std::move(name)), data_(std::move(data)) {
  at_one_ = raw(1.0, Side::Value);
}

CuspProfile CuspProfile::power(double coefficient, double exponent) {
  if (!(coefficient > 0.0) || !std::isfinite(coefficient))
    throw ArgumentError("power profile: coefficient must be positive");
  if (!(exponent > 0.0) || !std::isfinite(exponent))
    throw ArgumentError("power profile: exponent must be positive");
  std::string name = format_number(coefficient) + "*t^" + format_number(exponent);
  CuspProfile p(ProfileKind::Power, std::move(name), Power{coefficient, exponent});
  if (exponent >= 1.0) p.lipschitz_ = coefficient * exponent;
  p.doubling_ = std::pow(2.0, exponent);
  return p;
}

CuspProfile CuspProfile::linear(double slope) {
  if (!(slope > 0.0) || !std::isfinite(slope))
    throw ArgumentError("linear profile: slope must be positive");
  CuspProfile p(ProfileKind::Linear, format_number(slope) + "*t", Linear{slope});
  p.lipschitz_ = slope;
  p.doubling_ = 2.0;
  return p;
}

CuspProfile CuspProfile::make_table(ProfileKind kind, std::vector<double> breakpoints,
                                    std::vector<double> values) {
  try {
    validate_table(breakpoints, values);
  } catch (const ConfigError& e) {
    throw ArgumentError(e.what());
  }
  const std::string name = std::string(kind == ProfileKind::Step ? "step" : "tabulated") +
                           "[" + std::to_string(breakpoints.size()) + "]";
  auto table = std::make_shared<const Table>(Table{std::move(breakpoints), std::move(values)});
  CuspProfile out(kind, name, std::move(table));
  out.doubling_ = out.table_doubling_constant();
  return out;
}

double CuspProfile::table_doubling_constant() const {
  // psi(2t)/psi(t) is piecewise constant with breaks at b_i and b_i / 2
  std::vector<double> cuts{0.0, 0.5};
  for (double b : breakpoints()) {
    if (b < 0.5) cuts.push_back(b);
    if (b / 2.0 < 0.5) cuts.push_back(b / 2.0);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double worst = 1.0;
  const auto ratio = [this](double t) { return raw(2.0 * t, Side::Value) / raw(t, Side::Value); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    worst = std::max(worst, ratio(0.5 * (cuts[i] + cuts[i + 1])));
    if (cuts[i + 1] < 0.5) worst = std::max(worst, ratio(cuts[i + 1]));
  }
  return worst;
}

CuspProfile CuspProfile::step(std::vector<double> breakpoints, std::vector<double> values) {
  return make_table(ProfileKind::Step, std::move(breakpoints), std::move(values));
}

CuspProfile CuspProfile::tabulated(std::vector<double> breakpoints, std::vector<double> values) {
  return make_table(ProfileKind::Tabulated, std::move(breakpoints), std::move(values));
}

CuspProfile CuspProfile::custom(std::string name, std::function<double(double)> value,
                                std::function<double(double)> derivative) {
  if (!value) throw ArgumentError("custom profile: value function is empty");
  return CuspProfile(ProfileKind::Custom, std::move(name),
                     Custom{std::move(value), std::move(derivative)});
}

double CuspProfile::raw(double t, Side side) const {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Power>) {
          return d.coefficient * std::pow(t, d.exponent);
        } else if constexpr (std::is_same_v<T, Linear>) {
          return d.slope * t;
        } else if constexpr (std::is_same_v<T, Custom>) {
          return d.value(t);
        } else {
          const auto& bp = d->breakpoints;
          const auto& vals = d->values;
          // first breakpoint >= t (value side) or > t (right side)
          auto it = side == Side::Right ? std::upper_bound(bp.begin(), bp.end(), t)
                                        : std::lower_bound(bp.begin(), bp.end(), t);
          if (it == bp.end()) return vals.back();
          return vals[static_cast<std::size_t>(it - bp.begin())];
        }
      },
      data_);
}

double CuspProfile::eval(double t, Side side) const {
  if (!(t > 0.0 && t <= 1.0))
    throw DomainError("cusp profile evaluated at t = " + format_number(t) +
                      " outside (0, 1]");
  if (side == Side::Right && t == 1.0) return at_one_;
  return raw(t, side);
}

double CuspProfile::value_or_zero(double t) const noexcept {
  return value_or_zero(t, Side::Value);
}

double CuspProfile::value_or_zero(double t, Side side) const noexcept {
  if (t < 0.0) return 0.0;
  if (t == 0.0) return side == Side::Right ? raw(std::nextafter(0.0, 1.0), Side::Value) : 0.0;
  if (t >= 1.0) return at_one_;
  return raw(t, side);
}

double CuspProfile::derivative(double t) const {
  if (!(t > 0.0 && t <= 1.0))
    throw DomainError("cusp profile derivative at t = " + format_number(t) +
                      " outside (0, 1]");
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Power>) {
          return d.coefficient * d.exponent * std::pow(t, d.exponent - 1.0);
        } else if constexpr (std::is_same_v<T, Linear>) {
          return d.slope;
        } else if constexpr (std::is_same_v<T, Custom>) {
          if (d.derivative) return d.derivative(t);
          const double h = 1e-6 * t;
          const double hi = std::min(1.0, t + h);
          const double lo = t - h;
          return (d.value(hi) - d.value(lo)) / (hi - lo);
        } else {
          return 0.0;
        }
      },
      data_);
}

std::span<const double> CuspProfile::breakpoints() const noexcept {
  if (const auto* t = std::get_if<std::shared_ptr<const Table>>(&data_)) return (*t)->breakpoints;
  return {};
}

std::span<const double> CuspProfile::values() const noexcept {
  if (const auto* t = std::get_if<std::shared_ptr<const Table>>(&data_)) return (*t)->values;
  return {};
}

std::vector<double> CuspProfile::jump_points() const {
  std::vector<double> out;
  const auto bp = breakpoints();
  const auto vals = values();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i)
    if (vals[i + 1] > vals[i]) out.push_back(bp[i]);
  return out;
}

CuspProfile CuspProfile::with_lipschitz_constant(double l) const {
  if (!(l > 0.0)) throw ArgumentError("lipschitz constant must be positive");
  CuspProfile p = *this;
  p.lipschitz_ = l;
  return p;
}

CuspProfile CuspProfile::with_doubling_constant(double c) const {
  if (!(c > 0.0)) throw ArgumentError("doubling constant must be positive");
  CuspProfile p = *this;
  p.doubling_ = c;
  return p;
}

CuspProfile CuspProfile::with_name(std::string name) const {
  CuspProfile p = *this;
  p.name_ = std::move(name);
  return p;
}

CuspProfile CuspProfile::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw ArgumentError("profile scale factor must be positive");
  if (factor == 1.0) return *this;
  CuspProfile out = std::visit(
      [&](const auto& d) -> CuspProfile {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Power>) {
          return power(d.coefficient * factor, d.exponent);
        } else if constexpr (std::is_same_v<T, Linear>) {
          return linear(d.slope * factor);
        } else if constexpr (std::is_same_v<T, Custom>) {
          auto value = [f = d.value, factor](double t) { return factor * f(t); };
          std::function<double(double)> deriv;
          if (d.derivative) deriv = [f = d.derivative, factor](double t) { return factor * f(t); };
          return custom(format_number(factor) + "*" + name_, value, deriv);
        } else {
          std::vector<double> vals(d->values);
          for (double& v : vals) v *= factor;
          return make_table(kind_, d->breakpoints, std::move(vals));
        }
      },
      data_);
  out.lipschitz_ = lipschitz_ ? std::optional<double>(*lipschitz_ * factor) : std::nullopt;
  out.doubling_ = doubling_;
  return out;
}

}  // namespace cuspext
