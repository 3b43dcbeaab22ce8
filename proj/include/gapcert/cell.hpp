#pragma once

#include <Eigen/Core>
#include <utility>

namespace gapcert {

/// One piece of a covering: a ball, the complement of an origin-centered
/// ball, an origin-centered annulus, or an axis-aligned box. A Ball with
/// infinite radius stands for the whole space.
struct Cell {
  enum class Shape { Ball, BallComplement, Annulus, Box };

  Shape shape = Shape::Ball;
  int dim = 0;
  Eigen::VectorXd center;       // Ball
  double radius = 0.0;          // Ball / BallComplement
  double r_in = 0.0, r_out = 0.0;  // Annulus
  Eigen::VectorXd lo, hi;       // Box

  static Cell ball(Eigen::VectorXd center, double radius);
  static Cell ball0(int dim, double radius);  // origin-centered
  static Cell ball_complement(int dim, double radius);
  static Cell annulus(int dim, double r_in, double r_out);
  static Cell box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Cell full_space(int dim);

  bool contains(const Eigen::VectorXd& x) const;
  bool is_full_space() const;

  /// True when the cell is invariant under rotations about the origin, so a
  /// radial quadrature path applies.
  bool origin_centered() const;

  /// Radial range [r_lo, r_hi] (r_hi may be +inf) for origin-centered cells;
  /// throws UnsupportedGeometry otherwise. A 1D Box [-R, R] qualifies.
  std::pair<double, double> radial_range() const;

  std::string describe() const;
};

} // namespace gapcert
