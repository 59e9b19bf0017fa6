#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cuspext {

enum class ProfileKind { Power, Linear, Step, Tabulated, Custom };

/// Which one-sided quantity eval() returns. `Value` and `Left` coincide
/// because cusp profiles are left-continuous.
enum class Side { Value, Left, Right };

/// A cuspidal function psi: (0, 1] -> (0, inf), left-continuous and
/// nondecreasing. Closed-form kinds carry exact one-sided limits; step and
/// tabulated kinds are left-continuous step functions read by table lookup,
/// never interpolated.
///
/// Table semantics: with breakpoints b_0 < ... < b_{m-1} and values
/// v_0 <= ... <= v_{m-1}, psi(t) = v_i for t in (b_{i-1}, b_i] (b_{-1} = 0),
/// and psi(t) = v_{m-1} for t > b_{m-1}.
class CuspProfile {
 public:
  /// psi(t) = coefficient * t^exponent.
  static CuspProfile power(double coefficient, double exponent);
  /// psi(t) = slope * t.
  static CuspProfile linear(double slope);
  static CuspProfile step(std::vector<double> breakpoints,
                          std::vector<double> values);
  static CuspProfile tabulated(std::vector<double> breakpoints,
                               std::vector<double> values);
  /// Continuous profile given by a callable. `derivative` may be empty, in
  /// which case derivative() falls back to central differences.
  static CuspProfile custom(std::string name, std::function<double(double)> value,
                            std::function<double(double)> derivative = {});

  ProfileKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  /// psi(t); throws DomainError unless 0 < t <= 1.
  double operator()(double t) const { return eval(t, Side::Value); }
  /// One-sided evaluation. The right limit at t = 1 is defined as psi(1).
  double eval(double t, Side side) const;
  /// psi with the zero extension psi(t) = 0 for t <= 0 and psi(t) = psi(1)
  /// for t > 1. Never throws.
  double value_or_zero(double t) const noexcept;
  double value_or_zero(double t, Side side) const noexcept;
  /// psi'(t) where it exists; zero between breakpoints of table kinds.
  double derivative(double t) const;
  double at_one() const noexcept { return at_one_; }

  bool is_table() const noexcept {
    return kind_ == ProfileKind::Step || kind_ == ProfileKind::Tabulated;
  }
  /// Breakpoints of table kinds (empty otherwise).
  std::span<const double> breakpoints() const noexcept;
  std::span<const double> values() const noexcept;
  /// Interior points of (0, 1) where psi may jump.
  std::vector<double> jump_points() const;

  std::optional<double> lipschitz_constant() const noexcept { return lipschitz_; }
  std::optional<double> doubling_constant() const noexcept { return doubling_; }
  CuspProfile with_lipschitz_constant(double l) const;
  CuspProfile with_doubling_constant(double c) const;
  CuspProfile with_name(std::string name) const;

  /// factor * psi, with constants rescaled accordingly.
  CuspProfile scaled(double factor) const;

 private:
  struct Power {
    double coefficient;
    double exponent;
  };
  struct Linear {
    double slope;
  };
  struct Table {
    std::vector<double> breakpoints;
    std::vector<double> values;
  };
  struct Custom {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
  };
  using Data = std::variant<Power, Linear, std::shared_ptr<const Table>, Custom>;

  CuspProfile(ProfileKind kind, std::string name, Data data);
  static CuspProfile make_table(ProfileKind kind, std::vector<double> breakpoints,
                                std::vector<double> values);
  double raw(double t, Side side) const;
  double table_doubling_constant() const;

  ProfileKind kind_;
  std::string name_;
  Data data_;
  double at_one_ = 0.0;
  std::optional<double> lipschitz_;
  std::optional<double> doubling_;
};

/// Validates a raw (breakpoint, value) table: breakpoints strictly ascending
/// in (0, 1], values strictly positive and nondecreasing. Throws ConfigError
/// naming the first offending row, numbered from row_offset.
void validate_table(std::span<const double> breakpoints, std::span<const double> values,
                    std::size_t row_offset = 0);

}  // namespace cuspext
