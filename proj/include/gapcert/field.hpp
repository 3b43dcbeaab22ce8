#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

namespace gapcert {

enum class Monotonicity { unknown, increasing, decreasing, constant };

/// Radial profile with optional piecewise monotonicity information. The
/// breakpoints split [0, inf) into pieces; piece_mono[i] describes the
/// profile on (breaks[i-1], breaks[i]).
struct RadialProfile {
  std::function<double(double)> f;
  std::vector<double> breaks;              // sorted, interior breakpoints
  std::vector<Monotonicity> piece_mono;    // size breaks.size() + 1

  RadialProfile() = default;
  RadialProfile(std::function<double(double)> fn, Monotonicity mono)
      : f(std::move(fn)), piece_mono{mono} {}

  double operator()(double r) const { return f(r); }

  /// Monotonicity on [lo, hi]; `unknown` if the range spans pieces whose tags
  /// do not agree.
  Monotonicity mono_on(double lo, double hi) const;
};

/// A scalar field on R^n, with an optional radial representation that enables
/// the certified quadrature and extremum paths.
struct ScalarField {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> point;
  std::optional<RadialProfile> radial;
  bool nonnegative = false;  // set only when structurally known

  bool is_radial() const { return radial.has_value(); }
  double operator()(const Eigen::VectorXd& x) const { return point(x); }

  static ScalarField constant(int dim, double c);
  static ScalarField from_radial(int dim, std::function<double(double)> f,
                                 Monotonicity mono = Monotonicity::unknown,
                                 bool nonneg = false);
  static ScalarField from_point(int dim, std::function<double(const Eigen::VectorXd&)> f);
};

} // namespace gapcert
