#include "gapcert/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"
#include "gapcert/numerics.hpp"

namespace gapcert {

double hessian_min_eigenvalue(const PotentialEvaluator& pe, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd H = pe.hessian_at(x);
  const double scale = std::max(H.norm(), 1e-300);
  if ((H - H.transpose()).norm() > 1e-12 * scale)
    fail(ErrorKind::NonSymmetricHessian,
         "Hessian asymmetry exceeds 1e-12 relative tolerance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

Monotonicity power_mono(double alpha) {
  if (alpha == 2.0) return Monotonicity::constant;
  return alpha > 2.0 ? Monotonicity::increasing : Monotonicity::decreasing;
}

// rho profile for the power-law families; piecewise across R_a for the
// one-sided quadratic continuations.
RadialProfile power_law_rho(const RadialMeasure& rm) {
  const PowerLawParams& p = *rm.family;
  const double alpha = p.alpha;
  const double lead = std::min(1.0, alpha - 1.0);
  auto rho_pow = [alpha, lead](double r) {
    if (alpha == 2.0) return lead;
    return lead * std::pow(r, alpha - 2.0);
  };
  RadialProfile prof;
  if (p.branch == PowerLawBranch::pure) {
    prof.f = rho_pow;
    prof.piece_mono = {power_mono(alpha)};
    return prof;
  }
  const double R = p.R_a(rm.dim);
  const double kappa = p.outer_curvature(rm.dim);
  const bool power_inside = p.branch == PowerLawBranch::prop71;
  prof.f = [=](double r) {
    const bool power_side = power_inside ? (r <= R) : (r >= R);
    return power_side ? rho_pow(r) : kappa;
  };
  prof.breaks = {R};
  if (power_inside)
    prof.piece_mono = {power_mono(alpha), Monotonicity::constant};
  else
    prof.piece_mono = {Monotonicity::constant, power_mono(alpha)};
  return prof;
}

} // namespace

CurvatureField curvature_field(const MeasureSpec& measure) {
  CurvatureField cf;
  const int n = measure.dim();
  if (measure.is_radial()) {
    const RadialMeasure& rm = measure.radial();
    if (rm.family) {
      RadialProfile prof = power_law_rho(rm);
      cf.rho.dim = n;
      cf.rho.radial = prof;
      auto f = prof.f;
      cf.rho.point = [f](const Eigen::VectorXd& x) { return f(x.norm()); };
      cf.rho.nonnegative = rm.family->alpha >= 1.0;
      return cf;
    }
    RadialMeasure copy = rm;
    auto profile = [copy](double r) {
      if (r <= 0) return copy.deriv2_at(std::max(r, 1e-12));
      return std::min(copy.deriv2_at(r), copy.profile_deriv(r) / r);
    };
    cf.rho = ScalarField::from_radial(n, profile);
    return cf;
  }
  PotentialEvaluator pe = measure.evaluator();
  cf.rho = ScalarField::from_point(n, [pe](const Eigen::VectorXd& x) {
    return hessian_min_eigenvalue(pe, x);
  });
  return cf;
}

namespace {

Monotonicity flipped(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return Monotonicity::decreasing;
    case Monotonicity::decreasing: return Monotonicity::increasing;
    default: return m;
  }
}

} // namespace

std::pair<ScalarField, ScalarField> rho_split(const ScalarField& rho) {
  ScalarField plus, minus;
  plus.dim = minus.dim = rho.dim;
  auto pf = rho.point;
  plus.point = [pf](const Eigen::VectorXd& x) { return std::max(pf(x), 0.0); };
  minus.point = [pf](const Eigen::VectorXd& x) { return std::max(-pf(x), 0.0); };
  plus.nonnegative = minus.nonnegative = true;
  if (rho.radial) {
    auto rf = rho.radial->f;
    RadialProfile pp = *rho.radial, mp = *rho.radial;
    pp.f = [rf](double r) { return std::max(rf(r), 0.0); };
    mp.f = [rf](double r) { return std::max(-rf(r), 0.0); };
    // clipping preserves monotone direction; negation flips it
    for (auto& m : mp.piece_mono) m = flipped(m);
    plus.radial = pp;
    minus.radial = mp;
  }
  return {plus, minus};
}

ScalarField CurvatureField::rho_plus() const { return rho_split(rho).first; }
ScalarField CurvatureField::rho_minus() const { return rho_split(rho).second; }

FormBoundSpec make_form_bound(double alpha_fb) {
  if (!(alpha_fb >= 0.0 && alpha_fb < 1.0))
    fail(ErrorKind::SchemaError, "form bound alpha must lie in [0, 1)");
  FormBoundSpec fb;
  fb.alpha_fb = alpha_fb;
  fb.provenance = FormBoundSpec::Provenance::user_supplied;
  return fb;
}

double apply_form_bound_discount(double bound, const FormBoundSpec& fb) {
  return (1.0 - fb.alpha_fb) * bound;
}

bool rho_nonneg_on_probes(const CurvatureField& cf, double probe_radius,
                          int probe_count) {
  for (int k = 0; k < probe_count; ++k) {
    Eigen::VectorXd u = halton_point(k, cf.rho.dim);
    Eigen::VectorXd x = (2.0 * u.array() - 1.0).matrix() * probe_radius;
    if (cf.rho(x) < 0) return false;
  }
  return true;
}

} // namespace gapcert
