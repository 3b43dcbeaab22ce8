#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <variant>

#include "gapcert/cell.hpp"
#include "gapcert/field.hpp"

namespace gapcert {

/// Pointwise access to a potential V, its gradient and Hessian. Missing
/// gradient/hessian callbacks fall back to central finite differences with
/// step 1e-5*(1+|x|).
struct PotentialEvaluator {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;

  Eigen::VectorXd gradient_at(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian_at(const Eigen::VectorXd& x) const;
};

enum class PowerLawBranch { prop71, prop72, pure };

/// Parameters of the exponential-power family W(r) = r^alpha/alpha and its
/// one-sided quadratic continuations. `prop71` keeps the power profile inside
/// B(0,R_a) and continues quadratically outside with curvature
/// c*(a n)^(1-2/alpha); `prop72` mirrors the construction (power profile
/// outside, quadratic inside with curvature c*(alpha-1)*(a n)^(1-2/alpha));
/// `pure` is the plain power profile everywhere.
struct PowerLawParams {
  double alpha = 2.0;
  double a = 1.0;
  double c = 1.0;
  PowerLawBranch branch = PowerLawBranch::pure;

  double R_a(int n) const;              // (a*n)^(1/alpha)
  double outer_curvature(int n) const;  // the quadratic continuation curvature
};

struct RadialMeasure {
  int dim = 0;
  std::function<double(double)> profile;         // W(r)
  std::function<double(double)> profile_deriv;   // W'(r)
  std::function<double(double)> profile_deriv2;  // W''(r); null -> finite differences
  std::optional<PowerLawParams> family;

  double deriv2_at(double r) const;
};

/// A weighted measure e^{-V} dx given either by a radial profile or by a
/// pointwise potential evaluator.
class MeasureSpec {
 public:
  static MeasureSpec power_law(double alpha, double a, double c, int dim,
                               PowerLawBranch branch = PowerLawBranch::pure);
  static MeasureSpec custom_radial(int dim, std::function<double(double)> W,
                                   std::function<double(double)> W1,
                                   std::function<double(double)> W2 = nullptr);
  static MeasureSpec from_evaluator(PotentialEvaluator pe);
  static MeasureSpec gaussian(int dim) { return power_law(2.0, 1.0, 1.0, dim); }

  bool is_radial() const { return std::holds_alternative<RadialMeasure>(source_); }
  int dim() const;
  const RadialMeasure& radial() const { return std::get<RadialMeasure>(source_); }
  const PotentialEvaluator& evaluator() const { return std::get<PotentialEvaluator>(source_); }

  /// log of the radial weight r^(n-1) e^(-W(r)); the workhorse of every
  /// radial quadrature. Only valid for radial measures.
  double log_radial_weight(double r) const;

  /// Potential value at a point, for either representation.
  double potential(const Eigen::VectorXd& x) const;

 private:
  std::variant<RadialMeasure, PotentialEvaluator> source_;
};

struct NormalizedMeasure {
  MeasureSpec base;
  double log_Z = 0.0;
  double tail_radius = 0.0;
  double eps_tail = 0.0;
};

/// Computes log Z and a certified tail radius R_t with mass(|x| > R_t) <
/// eps_tail * Z. Throws NonIntegrable when the mass diverges under doubling
/// of the truncation radius.
NormalizedMeasure normalize(const MeasureSpec& measure, double eps_tail = 1e-12);

/// Wraps a measure without computing Z (log_Z = 0). Every cell-conditioned
/// quantity is well defined; use for measures that are only examined on
/// bounded cells (e.g. the uniform measure).
NormalizedMeasure unnormalized(const MeasureSpec& measure, double domain_hint);

/// (1/mu(cell)) * Integral_cell |x|^gamma dmu. Radial measures use the
/// log-domain radial path; Box cells in dim <= 2 use tensor-grid quadrature.
double moment(const NormalizedMeasure& measure, const Cell& cell, double gamma);

/// Cell-conditioned mean of a scalar field; the delta-type average the local
/// bounds consume.
double mean_over_cell(const ScalarField& f, const NormalizedMeasure& measure,
                      const Cell& cell);

/// mu(cell) for a probability-normalized measure.
double mass_of_cell(const NormalizedMeasure& measure, const Cell& cell);

/// Fresh quadrature of the total normalized mass (diagnostic for the
/// normalization invariant).
double total_mass(const NormalizedMeasure& measure);

/// log of Integral_{r_lo}^{r_hi} r^(n-1) e^(-W(r)) dr, with r_hi possibly
/// infinite (truncated by a certified majorant).
double log_radial_cell_mass(const NormalizedMeasure& measure, double r_lo, double r_hi);

/// Surface measure of the unit sphere S^(n-1), in log form.
double log_sphere_surface(int n);

} // namespace gapcert
