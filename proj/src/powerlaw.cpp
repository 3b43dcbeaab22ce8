#include "gapcert/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"
#include "gapcert/numerics.hpp"
#include "gapcert/quadrature.hpp"

namespace gapcert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// log Integral_{y_lo}^{y_hi} y^(s-1) e^(-y) dy with y_hi possibly infinite
double log_incomplete_gamma(double s, double y_lo, double y_hi) {
  auto g = [s](double y) { return y > 0 ? (s - 1.0) * std::log(y) - y : -kInf; };
  double hi = y_hi;
  if (std::isinf(y_hi)) {
    const double peak = std::max({1.0, s - 1.0, y_lo});
    hi = quad::decay_cutoff(g, peak, g(peak), 60.0 + 2.0 * std::abs(s - 1.0));
  }
  quad::Options opt;
  opt.rel_tol = 1e-12;
  auto res = quad::integrate_log(g, y_lo, hi, opt);
  if (!res.converged)
    fail(ErrorKind::QuadratureFailure, "incomplete-gamma quadrature failed");
  return res.log_value;
}

} // namespace

double PowerLawSpec::R_a() const { return std::pow(a * n, 1.0 / alpha); }

void PowerLawSpec::validate() const {
  if (!(alpha >= 1.0)) fail(ErrorKind::SchemaError, "alpha must be >= 1");
  if (!(a > 0.0)) fail(ErrorKind::SchemaError, "a must be positive");
  if (!(c > 0.0 && c <= 1.0)) fail(ErrorKind::SchemaError, "c must lie in (0,1]");
  if (n < 1) fail(ErrorKind::SchemaError, "n must be >= 1");
  if (branch == PowerLawBranch::prop71 && !(alpha >= 2.0))
    fail(ErrorKind::BranchMismatch, "prop71 requires alpha >= 2");
  if (branch == PowerLawBranch::prop72 && !(alpha > 1.0 && alpha <= 2.0))
    fail(ErrorKind::BranchMismatch, "prop72 requires 1 < alpha <= 2");
}

MeasureSpec PowerLawSpec::measure() const {
  validate();
  return MeasureSpec::power_law(alpha, a, c, n, branch);
}

double i_integral_log(double alpha, double n, double R, double gamma) {
  if (!(alpha > 0)) fail(ErrorKind::SchemaError, "alpha must be positive");
  if (!(gamma > -n)) fail(ErrorKind::SchemaError, "need gamma > -n");
  if (!(R > 0)) fail(ErrorKind::SchemaError, "need R > 0");
  const double s = (gamma + n) / alpha;
  const double Y = std::isinf(R) ? kInf : std::pow(R, alpha) / alpha;
  return (s - 1.0) * std::log(alpha) + log_incomplete_gamma(s, 0.0, Y);
}

double i_integral(double alpha, double n, double R, double gamma) {
  return std::exp(i_integral_log(alpha, n, R, gamma));
}

double itilde_integral_log(double alpha, double n, double R, double gamma) {
  if (!(alpha > 0)) fail(ErrorKind::SchemaError, "alpha must be positive");
  if (!(gamma > -n)) fail(ErrorKind::SchemaError, "need gamma > -n");
  if (R < 0) fail(ErrorKind::SchemaError, "need R >= 0");
  const double s = (gamma + n) / alpha;
  const double Y = std::pow(R, alpha) / alpha;
  return (s - 1.0) * std::log(alpha) + log_incomplete_gamma(s, Y, kInf);
}

double itilde_integral(double alpha, double n, double R, double gamma) {
  return std::exp(itilde_integral_log(alpha, n, R, gamma));
}

double laplace_ratio_asymptotic(double alpha, double a, double gamma, bool tilde) {
  if (!(alpha > 1.0)) fail(ErrorKind::SchemaError, "asymptotic needs alpha > 1");
  const double anchor = tilde ? std::max(a, 1.0) : std::min(a, 1.0);
  return std::pow(anchor, gamma / alpha);
}

MeanRhoBall mean_rho_ball(double alpha, int n, double a) {
  if (!(alpha >= 2.0))
    fail(ErrorKind::BranchMismatch, "rho = r^(alpha-2) inside the ball needs alpha >= 2");
  const double R = std::pow(a * n, 1.0 / alpha);
  MeanRhoBall out;
  out.ratio = std::exp(i_integral_log(alpha, n, R, alpha - 2.0) -
                       i_integral_log(alpha, n, R, 0.0));
  out.asymptotic = a < 1.0 ? dim_power(a * n, alpha) : dim_power(n, alpha);
  return out;
}

double prop71_bracket(const PowerLawSpec& spec) {
  spec.validate();
  if (spec.branch != PowerLawBranch::prop71)
    fail(ErrorKind::BranchMismatch, "bracket formula is for the prop71 branch");
  if (spec.a <= 1.0)
    return std::min({0.25 / spec.a, 0.5, spec.c}) * dim_power(spec.a * spec.n, spec.alpha);
  return std::min(0.25, spec.c * dim_power(spec.a, spec.alpha)) *
         dim_power(spec.n, spec.alpha);
}

double prop72_bracket(const PowerLawSpec& spec) {
  spec.validate();
  if (spec.branch != PowerLawBranch::prop72)
    fail(ErrorKind::BranchMismatch, "bracket formula is for the prop72 branch");
  const double am1 = spec.alpha - 1.0;
  if (spec.a >= 1.0)
    return std::min({0.25 / spec.a, 0.5 * am1, spec.c * am1}) *
           dim_power(spec.a * spec.n, spec.alpha);
  return std::min({0.25, 0.5 * am1, spec.c * dim_power(spec.a, spec.alpha) * am1}) *
         dim_power(spec.n, spec.alpha);
}

GlobalBoundReport assemble_two_piece_bound(const PowerLawSpec& spec,
                                           const BoundConfig& config) {
  spec.validate();
  const MeasureSpec m = spec.measure();
  const NormalizedMeasure nm = normalize(m);
  const CurvatureField cf = curvature_field(m);
  const Covering cov = two_piece_covering(spec.R_a(), spec.n);
  return bound_for_covering(nm, cf, cov, config);
}

} // namespace gapcert
