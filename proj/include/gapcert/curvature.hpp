#pragma once

#include <Eigen/Core>
#include <utility>

#include "gapcert/field.hpp"
#include "gapcert/measure.hpp"

namespace gapcert {

/// The curvature lower-eigenvalue field rho(x) = lambda_min(Hess V(x)) on
/// R^n. For a radial potential V(x) = W(|x|) the Hessian eigenvalues are
/// W''(r) (radial direction) and W'(r)/r (with multiplicity n-1), so
/// rho(r) = min(W''(r), W'(r)/r).
struct CurvatureField {
  ScalarField rho;

  ScalarField rho_plus() const;
  ScalarField rho_minus() const;
};

/// Builds rho from either representation of the measure. Power-law families
/// get exact piecewise-monotone profiles; custom radial profiles fall back to
/// (possibly finite-difference) W''.
CurvatureField curvature_field(const MeasureSpec& measure);

/// Smallest eigenvalue of Hess V(x). Throws NonSymmetricHessian when the
/// supplied Hessian violates symmetry beyond 1e-12 relative to its norm.
double hessian_min_eigenvalue(const PotentialEvaluator& pe, const Eigen::VectorXd& x);

/// Positive/negative part split: rho = rho_plus - rho_minus pointwise.
std::pair<ScalarField, ScalarField> rho_split(const ScalarField& rho);

/// Constant alpha of the quadratic-form bound on rho^-; bounds certified
/// against rho are discounted by (1 - alpha).
struct FormBoundSpec {
  enum class Provenance { user_supplied, assumed_zero };
  double alpha_fb = 0.0;
  Provenance provenance = Provenance::assumed_zero;
};

FormBoundSpec make_form_bound(double alpha_fb);

/// (1 - alpha_fb) * bound.
double apply_form_bound_discount(double bound, const FormBoundSpec& fb);

/// True when rho >= 0 at `probe_count` deterministic probe points within
/// radius `probe_radius`. Supports the default form_bound_alpha = 0.
bool rho_nonneg_on_probes(const CurvatureField& cf, double probe_radius,
                          int probe_count = 256);

} // namespace gapcert
