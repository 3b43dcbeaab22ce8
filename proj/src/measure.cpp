#include "gapcert/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gapcert/errors.hpp"
#include "gapcert/numerics.hpp"
#include "gapcert/quadrature.hpp"

namespace gapcert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// PotentialEvaluator
// ---------------------------------------------------------------------------

Eigen::VectorXd PotentialEvaluator::gradient_at(const Eigen::VectorXd& x) const {
  if (gradient) return gradient(x);
  const double h = 1e-5 * (1.0 + x.norm());
  Eigen::VectorXd g(dim);
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < dim; ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (value(xp) - value(xm)) / (2 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

Eigen::MatrixXd PotentialEvaluator::hessian_at(const Eigen::VectorXd& x) const {
  if (hessian) return hessian(x);
  const double h = 1e-5 * (1.0 + x.norm());
  Eigen::MatrixXd H(dim, dim);
  Eigen::VectorXd xp = x, xm = x;
  for (int j = 0; j < dim; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    H.col(j) = (gradient_at(xp) - gradient_at(xm)) / (2 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return 0.5 * (H + H.transpose());
}

// ---------------------------------------------------------------------------
// Power-law family
// ---------------------------------------------------------------------------

double PowerLawParams::R_a(int n) const { return std::pow(a * n, 1.0 / alpha); }

double PowerLawParams::outer_curvature(int n) const {
  const double scale = dim_power(a * n, alpha);  // (a n)^(1-2/alpha)
  return branch == PowerLawBranch::prop72 ? c * (alpha - 1.0) * scale : c * scale;
}

double RadialMeasure::deriv2_at(double r) const {
  if (profile_deriv2) return profile_deriv2(r);
  const double h = 1e-5 * (1.0 + std::abs(r));
  const double lo = std::max(r - h, 0.5 * r);
  return (profile_deriv(r + h) - profile_deriv(lo)) / (r + h - lo);
}

MeasureSpec MeasureSpec::power_law(double alpha, double a, double c, int dim,
                                   PowerLawBranch branch) {
  if (!(alpha > 0)) fail(ErrorKind::SchemaError, "power_law needs alpha > 0");
  if (!(a > 0)) fail(ErrorKind::SchemaError, "power_law needs a > 0");
  if (!(c > 0 && c <= 1)) fail(ErrorKind::SchemaError, "power_law needs c in (0,1]");
  if (dim < 1) fail(ErrorKind::SchemaError, "dimension must be >= 1");
  if (branch == PowerLawBranch::prop71 && !(alpha >= 2))
    fail(ErrorKind::BranchMismatch, "prop71 branch requires alpha >= 2");
  if (branch == PowerLawBranch::prop72 && !(alpha > 1 && alpha <= 2))
    fail(ErrorKind::BranchMismatch, "prop72 branch requires 1 < alpha <= 2");

  PowerLawParams params{alpha, a, c, branch};
  RadialMeasure rm;
  rm.dim = dim;
  rm.family = params;

  auto Wp = [alpha](double r) { return std::pow(r, alpha) / alpha; };
  auto W1p = [alpha](double r) { return std::pow(r, alpha - 1.0); };
  auto W2p = [alpha](double r) {
    return alpha == 2.0 ? 1.0 : (alpha - 1.0) * std::pow(r, alpha - 2.0);
  };

  if (branch == PowerLawBranch::pure) {
    rm.profile = Wp;
    rm.profile_deriv = W1p;
    rm.profile_deriv2 = W2p;
  } else {
    // C^1 quadratic continuation of the power profile across R_a, with
    // curvature chosen so Hess V keeps the prescribed lower bound on the
    // continued side.
    const double R = params.R_a(dim);
    const double kappa = params.outer_curvature(dim);
    const double WR = Wp(R), W1R = W1p(R);
    const bool power_inside = branch == PowerLawBranch::prop71;
    auto quad = [WR, W1R, kappa, R](double r) {
      const double d = r - R;
      return WR + W1R * d + 0.5 * kappa * d * d;
    };
    auto quad1 = [W1R, kappa, R](double r) { return W1R + kappa * (r - R); };
    rm.profile = [=](double r) {
      const bool power_side = power_inside ? (r <= R) : (r >= R);
      return power_side ? Wp(r) : quad(r);
    };
    rm.profile_deriv = [=](double r) {
      const bool power_side = power_inside ? (r <= R) : (r >= R);
      return power_side ? W1p(r) : quad1(r);
    };
    rm.profile_deriv2 = [=](double r) {
      const bool power_side = power_inside ? (r <= R) : (r >= R);
      return power_side ? W2p(r) : kappa;
    };
  }

  MeasureSpec m;
  m.source_ = std::move(rm);
  return m;
}

MeasureSpec MeasureSpec::custom_radial(int dim, std::function<double(double)> W,
                                       std::function<double(double)> W1,
                                       std::function<double(double)> W2) {
  if (dim < 1) fail(ErrorKind::SchemaError, "dimension must be >= 1");
  RadialMeasure rm;
  rm.dim = dim;
  rm.profile = std::move(W);
  rm.profile_deriv = std::move(W1);
  rm.profile_deriv2 = std::move(W2);
  MeasureSpec m;
  m.source_ = std::move(rm);
  return m;
}

MeasureSpec MeasureSpec::from_evaluator(PotentialEvaluator pe) {
  if (pe.dim < 1) fail(ErrorKind::SchemaError, "dimension must be >= 1");
  if (!pe.value) fail(ErrorKind::SchemaError, "evaluator needs a value callback");
  MeasureSpec m;
  m.source_ = std::move(pe);
  return m;
}

int MeasureSpec::dim() const {
  return is_radial() ? radial().dim : evaluator().dim;
}

double MeasureSpec::log_radial_weight(double r) const {
  const RadialMeasure& rm = radial();
  if (r < 0) return kNegInf;
  if (r == 0) return rm.dim == 1 ? -rm.profile(0.0) : kNegInf;
  return (rm.dim - 1) * std::log(r) - rm.profile(r);
}

double MeasureSpec::potential(const Eigen::VectorXd& x) const {
  return is_radial() ? radial().profile(x.norm()) : evaluator().value(x);
}

double log_sphere_surface(int n) {
  if (n == 1) return std::log(2.0);  // S^0 = two points
  return std::log(2.0) + 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n);
}

// ---------------------------------------------------------------------------
// Radial integration helpers
// ---------------------------------------------------------------------------

namespace {

struct RadialScan {
  double r_peak = 1.0;
  double g_peak = 0.0;
};

// Locate the maximum of g(r) = (n-1) log r - W(r) on [r_lo, inf) by octave
// scan plus local refinement. Throws NonIntegrable when g never decays.
RadialScan scan_radial_peak(const MeasureSpec& m, double r_lo) {
  auto g = [&](double r) { return m.log_radial_weight(r); };
  double best_r = std::max(r_lo, 1e-12), best_g = g(best_r);
  double decay_r = kInf;
  for (int k = -40; k <= 110; ++k) {
    const double r = std::max(r_lo, 0.0) + std::ldexp(1.0, k);
    const double gv = g(r);
    if (gv > best_g) {
      best_g = gv;
      best_r = r;
    }
    if (gv < best_g - 45.0) {
      decay_r = r;
      break;
    }
  }
  if (std::isinf(decay_r))
    fail(ErrorKind::NonIntegrable,
         "radial weight does not decay under doubling of the truncation radius");
  // refine the peak within its bracketing octaves
  double lo = std::max(r_lo, best_r / 4), hi = best_r * 4;
  for (int round = 0; round < 6; ++round) {
    const int pts = 33;
    double rb = best_r, gb = best_g;
    for (int i = 0; i <= pts; ++i) {
      const double r = lo + (hi - lo) * i / pts;
      if (r <= r_lo && m.dim() > 1) continue;
      const double gv = g(std::max(r, r_lo));
      if (gv > gb) {
        gb = gv;
        rb = std::max(r, r_lo);
      }
    }
    best_r = rb;
    best_g = gb;
    const double span = (hi - lo) / pts;
    lo = std::max(r_lo, best_r - 2 * span);
    hi = best_r + 2 * span;
  }
  return {best_r, best_g};
}

// Finite upper limit that captures Integral exp(g) over [r_lo, inf) to
// relative accuracy well below `drop` in log scale.
double radial_cutoff(const MeasureSpec& m, double r_lo, double drop) {
  RadialScan s = scan_radial_peak(m, r_lo);
  auto g = [&](double r) { return m.log_radial_weight(r); };
  return quad::decay_cutoff(g, std::max(s.r_peak, r_lo), s.g_peak, drop);
}

// log Integral_{r_lo}^{r_hi} r^(n-1) e^(-W) dr; r_hi possibly infinite.
double log_radial_mass_between(const MeasureSpec& m, double r_lo, double r_hi,
                               double drop) {
  const double hi = std::isinf(r_hi) ? radial_cutoff(m, r_lo, drop) : r_hi;
  auto g = [&](double r) { return m.log_radial_weight(r); };
  quad::Options opt;
  opt.rel_tol = 1e-12;
  auto res = quad::integrate_log(g, r_lo, hi, opt);
  if (!res.converged)
    fail(ErrorKind::QuadratureFailure, "radial mass quadrature did not converge");
  return res.log_value;
}

// Certified tail majorant: for W convex increasing past R with
// W'(R) >= 2(n-1)/R, the integrand r^(n-1) e^(-W) is dominated by a
// decaying exponential and Integral_R^inf <= 2 R^(n-1) e^(-W(R)) / W'(R).
bool majorant_valid(const RadialMeasure& rm, double R) {
  const int n = rm.dim;
  const double w1 = rm.profile_deriv(R);
  if (!(w1 > 0) || !(w1 >= 2.0 * (n - 1) / R)) return false;
  if (rm.family && rm.family->alpha >= 1.0) return true;  // W' nondecreasing in closed form
  double prev = w1;
  for (int i = 1; i <= 64; ++i) {
    const double r = R * (1.0 + 0.25 * i);
    const double w = rm.profile_deriv(r);
    if (w < prev - 1e-10 * std::max(1.0, std::abs(prev))) return false;
    prev = w;
  }
  return true;
}

double log_tail_majorant(const RadialMeasure& rm, double R) {
  return std::log(2.0) + (rm.dim - 1) * std::log(R) - rm.profile(R) -
         std::log(rm.profile_deriv(R));
}

} // namespace

double log_radial_cell_mass(const NormalizedMeasure& measure, double r_lo, double r_hi) {
  return log_radial_mass_between(measure.base, r_lo, r_hi, 40.0);
}

// ---------------------------------------------------------------------------
// Grid quadrature (Box cells, dim <= 2)
// ---------------------------------------------------------------------------

namespace {

double potential_shift(const MeasureSpec& m, const Cell& box) {
  double vmin = kInf;
  const int pts = 16;
  if (box.dim == 1) {
    for (int i = 0; i <= pts; ++i) {
      Eigen::VectorXd x(1);
      x[0] = box.lo[0] + (box.hi[0] - box.lo[0]) * i / pts;
      vmin = std::min(vmin, m.potential(x));
    }
  } else {
    for (int i = 0; i <= pts; ++i)
      for (int j = 0; j <= pts; ++j) {
        Eigen::VectorXd x(2);
        x[0] = box.lo[0] + (box.hi[0] - box.lo[0]) * i / pts;
        x[1] = box.lo[1] + (box.hi[1] - box.lo[1]) * j / pts;
        vmin = std::min(vmin, m.potential(x));
      }
  }
  return vmin;
}

// Composite Simpson on a 2D box with m panels per side (m even).
double simpson_2d(const std::function<double(double, double)>& f, const Cell& box,
                  int m) {
  const double ax = box.lo[0], bx = box.hi[0], ay = box.lo[1], by = box.hi[1];
  const double hx = (bx - ax) / m, hy = (by - ay) / m;
  auto wt = [m](int i) { return i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double wx = wt(i);
    for (int j = 0; j <= m; ++j) sum += wx * wt(j) * f(ax + i * hx, ay + j * hy);
  }
  return sum * hx * hy / 9.0;
}

// Integral of f * e^{-(V - shift)} over a Box cell, adaptively refined.
double grid_weighted_integral(const MeasureSpec& m, const Cell& box,
                              const std::function<double(const Eigen::VectorXd&)>& f,
                              double shift, double rel_tol) {
  if (box.dim == 1) {
    auto integrand = [&](double x) {
      Eigen::VectorXd p(1);
      p[0] = x;
      return f(p) * std::exp(-(m.potential(p) - shift));
    };
    quad::Options opt;
    opt.rel_tol = rel_tol;
    auto res = quad::integrate(integrand, box.lo[0], box.hi[0], opt);
    if (!res.converged) fail(ErrorKind::QuadratureFailure, "1D cell quadrature failed");
    return res.value;
  }
  if (box.dim != 2)
    fail(ErrorKind::UnsupportedGeometry, "grid quadrature restricted to dim <= 2");
  auto integrand = [&](double x, double y) {
    Eigen::VectorXd p(2);
    p[0] = x;
    p[1] = y;
    return f(p) * std::exp(-(m.potential(p) - shift));
  };
  double prev = simpson_2d(integrand, box, 16);
  for (int mm = 32; mm <= 1024; mm *= 2) {
    const double cur = simpson_2d(integrand, box, mm);
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  fail(ErrorKind::QuadratureFailure, "2D grid quadrature did not stabilize");
}

} // namespace

// ---------------------------------------------------------------------------
// normalize
// ---------------------------------------------------------------------------

NormalizedMeasure normalize(const MeasureSpec& measure, double eps_tail) {
  if (!(eps_tail > 0 && eps_tail <= 1e-6))
    fail(ErrorKind::SchemaError, "eps_tail must lie in (0, 1e-6]");

  NormalizedMeasure nm;
  nm.base = measure;
  nm.eps_tail = eps_tail;

  if (measure.is_radial()) {
    const RadialMeasure& rm = measure.radial();
    const double drop = -std::log(eps_tail) + 35.0;
    const double L = log_radial_mass_between(measure, 0.0, kInf, drop);
    nm.log_Z = log_sphere_surface(rm.dim) + L;

    // Certified tail radius: smallest R with majorant <= eps_tail * Z.
    const double target = std::log(eps_tail) + L;
    RadialScan s = scan_radial_peak(measure, 0.0);
    double hi = std::max(s.r_peak, 1.0);
    int guard = 0;
    while (!(majorant_valid(rm, hi) && log_tail_majorant(rm, hi) <= target)) {
      hi *= 1.5;
      if (++guard > 300)
        fail(ErrorKind::NonIntegrable, "no certified tail radius found");
    }
    double lo = s.r_peak;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (majorant_valid(rm, mid) && log_tail_majorant(rm, mid) <= target)
        hi = mid;
      else
        lo = mid;
    }
    nm.tail_radius = hi;
    return nm;
  }

  const PotentialEvaluator& pe = measure.evaluator();
  if (pe.dim > 2)
    fail(ErrorKind::UnsupportedGeometry,
         "non-radial normalization restricted to dim <= 2");
  auto one = [](const Eigen::VectorXd&) { return 1.0; };
  double R = 1.0;
  double prev_mass = -1.0, prev_increment = kInf;
  int growth_streak = 0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(pe.dim, -R);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(pe.dim, R);
    const Cell box = Cell::box(lo, hi);
    const double shift = potential_shift(measure, box);
    const double mass = grid_weighted_integral(measure, box, one, shift, 1e-10) *
                        std::exp(-shift);
    if (prev_mass > 0) {
      const double increment = mass - prev_mass;
      if (increment <= eps_tail * mass) {
        nm.log_Z = std::log(mass);
        nm.tail_radius = R;
        return nm;
      }
      growth_streak = increment > prev_increment ? growth_streak + 1 : 0;
      if (growth_streak >= 8 || !std::isfinite(mass))
        fail(ErrorKind::NonIntegrable, "mass diverges under doubling of truncation box");
      prev_increment = increment;
    }
    prev_mass = mass;
    R *= 2.0;
  }
  fail(ErrorKind::QuadratureFailure, "normalization did not stabilize within budget");
}

NormalizedMeasure unnormalized(const MeasureSpec& measure, double domain_hint) {
  NormalizedMeasure nm;
  nm.base = measure;
  nm.log_Z = 0.0;
  nm.tail_radius = domain_hint;
  nm.eps_tail = 0.0;
  return nm;
}

// ---------------------------------------------------------------------------
// Cell-conditioned quantities
// ---------------------------------------------------------------------------

namespace {

bool radial_path_applies(const ScalarField& f, const NormalizedMeasure& m,
                         const Cell& cell) {
  return m.base.is_radial() && f.is_radial() && cell.origin_centered();
}

double radial_conditioned_mean(const std::function<double(double)>& f,
                               const NormalizedMeasure& m, const Cell& cell) {
  auto [r_lo, r_hi] = cell.radial_range();
  double hi = r_hi;
  if (std::isinf(r_hi)) {
    // cutoff must account for polynomial growth of f against the weight
    auto gf = [&](double r) {
      return m.base.log_radial_weight(r) + std::log1p(std::abs(f(r)));
    };
    RadialScan s = scan_radial_peak(m.base, r_lo);
    double gpk = gf(s.r_peak);
    gpk = std::max(gpk, gf(std::max(r_lo, s.r_peak)));
    hi = quad::decay_cutoff(gf, std::max(s.r_peak, r_lo), gpk, 42.0);
  }
  const double L = log_radial_mass_between(m.base, r_lo, hi, 40.0);
  auto integrand = [&](double r) {
    const double lw = m.base.log_radial_weight(r) - L;
    return lw < -700.0 ? 0.0 : f(r) * std::exp(lw);
  };
  quad::Options opt;
  opt.rel_tol = 5e-10;
  opt.abs_tol = 1e-14;
  auto res = quad::integrate(integrand, r_lo, hi, opt);
  if (!res.converged)
    fail(ErrorKind::QuadratureFailure, "cell mean quadrature did not converge");
  return res.value;
}

Cell require_box_path(const NormalizedMeasure&, const Cell& cell) {
  if (cell.shape == Cell::Shape::Box && cell.dim <= 2) return cell;
  // 1D radial cells are intervals; route them through the 1D grid path when
  // the integrand is not radial.
  if (cell.dim == 1 && cell.origin_centered() && !cell.is_full_space()) {
    auto [lo, hi] = cell.radial_range();
    Eigen::VectorXd l(1), h(1);
    l[0] = -hi;
    h[0] = hi;
    if (cell.shape == Cell::Shape::Ball || cell.shape == Cell::Shape::Box)
      return Cell::box(l, h);
  }
  fail(ErrorKind::UnsupportedGeometry,
       "no quadrature path for " + cell.describe() + " with this measure/field");
}

} // namespace

double mean_over_cell(const ScalarField& f, const NormalizedMeasure& measure,
                      const Cell& cell) {
  if (radial_path_applies(f, measure, cell))
    return radial_conditioned_mean(f.radial->f, measure, cell);
  const Cell box = require_box_path(measure, cell);
  const double shift = potential_shift(measure.base, box);
  auto one = [](const Eigen::VectorXd&) { return 1.0; };
  const double den = grid_weighted_integral(measure.base, box, one, shift, 1e-10);
  const double num = grid_weighted_integral(measure.base, box, f.point, shift, 1e-9);
  if (!(den > 0)) fail(ErrorKind::QuadratureFailure, "cell has vanishing mass");
  return num / den;
}

double moment(const NormalizedMeasure& measure, const Cell& cell, double gamma) {
  if (!(gamma > -measure.base.dim()))
    fail(ErrorKind::SchemaError, "moment requires gamma > -n");
  if (measure.base.is_radial() && cell.origin_centered()) {
    auto [r_lo, r_hi] = cell.radial_range();
    const double drop = 45.0 + std::abs(gamma) * 3.0;
    auto g_num = [&](double r) {
      return measure.base.log_radial_weight(r) +
             (r > 0 ? gamma * std::log(r) : (gamma == 0 ? 0.0 : kNegInf));
    };
    double hi = r_hi;
    if (std::isinf(r_hi)) {
      RadialScan s = scan_radial_peak(measure.base, r_lo);
      hi = quad::decay_cutoff(g_num, std::max(s.r_peak, std::max(r_lo, 1e-12)),
                              g_num(std::max(s.r_peak, r_lo)), drop);
    }
    quad::Options opt;
    opt.rel_tol = 1e-11;
    auto num = quad::integrate_log(g_num, r_lo, hi, opt);
    const double den = log_radial_mass_between(measure.base, r_lo, hi, drop);
    if (!num.converged)
      fail(ErrorKind::QuadratureFailure, "moment quadrature did not converge");
    return std::exp(num.log_value - den);
  }
  ScalarField f = ScalarField::from_point(
      measure.base.dim(), [gamma](const Eigen::VectorXd& x) {
        return std::pow(x.norm(), gamma);
      });
  return mean_over_cell(f, measure, cell);
}

double mass_of_cell(const NormalizedMeasure& measure, const Cell& cell) {
  if (measure.base.is_radial() && cell.origin_centered()) {
    auto [r_lo, r_hi] = cell.radial_range();
    const double L = log_radial_mass_between(measure.base, r_lo, r_hi, 40.0);
    return std::exp(log_sphere_surface(measure.base.dim()) + L - measure.log_Z);
  }
  const Cell box = require_box_path(measure, cell);
  const double shift = potential_shift(measure.base, box);
  auto one = [](const Eigen::VectorXd&) { return 1.0; };
  const double raw = grid_weighted_integral(measure.base, box, one, shift, 1e-10);
  // raw = e^{shift} * Integral e^{-V}, so mass = raw * e^{-shift - log Z}
  return raw * std::exp(-shift - measure.log_Z);
}

double total_mass(const NormalizedMeasure& measure) {
  if (measure.base.is_radial())
    return mass_of_cell(measure, Cell::full_space(measure.base.dim()));
  const int n = measure.base.dim();
  const double R = measure.tail_radius;
  return mass_of_cell(measure, Cell::box(Eigen::VectorXd::Constant(n, -R),
                                         Eigen::VectorXd::Constant(n, R)));
}

} // namespace gapcert
