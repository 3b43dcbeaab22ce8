#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "gapcert/curvature.hpp"
#include "gapcert/errors.hpp"

using namespace gapcert;

namespace {

// closed-form Hessian of W(|x|): W''(r) P_r + (W'(r)/r) (I - P_r)
PotentialEvaluator radial_evaluator(int n, double alpha) {
  PotentialEvaluator pe;
  pe.dim = n;
  pe.value = [alpha](const Eigen::VectorXd& x) {
    return std::pow(x.norm(), alpha) / alpha;
  };
  pe.hessian = [alpha, n](const Eigen::VectorXd& x) {
    const double r = x.norm();
    const Eigen::MatrixXd P = x * x.transpose() / (r * r);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const double w2 = (alpha - 1.0) * std::pow(r, alpha - 2.0);
    const double w1r = std::pow(r, alpha - 2.0);
    return (w2 * P + w1r * (I - P)).eval();
  };
  return pe;
}

} // namespace

TEST_CASE("hessian_min_eigenvalue: quartic potential at (1,0)") {
  auto pe = radial_evaluator(2, 4.0);
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;
  CHECK(hessian_min_eigenvalue(pe, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hessian_min_eigenvalue: Gaussian is identically 1") {
  auto pe = radial_evaluator(3, 2.0);
  Eigen::VectorXd x(3);
  x << 0.3, -1.2, 0.5;
  CHECK(hessian_min_eigenvalue(pe, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hessian_min_eigenvalue: subquadratic power at |x| = 4") {
  auto pe = radial_evaluator(3, 1.5);
  Eigen::VectorXd x(3);
  x << 4.0, 0.0, 0.0;
  // min(alpha-1, 1) * r^{alpha-2} = 0.5 * 4^{-1/2}
  CHECK(hessian_min_eigenvalue(pe, x) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("radial eigenvalue formula agrees with the dense solve") {
  const double alpha = 3.0;
  const int n = 5;
  auto pe = radial_evaluator(n, alpha);
  auto cf = curvature_field(MeasureSpec::power_law(alpha, 1.0, 1.0, n));
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> unif(0.05, 6.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double r = unif(rng);
    Eigen::VectorXd dir(n);
    for (int d = 0; d < n; ++d) dir[d] = gauss(rng);
    dir.normalize();
    const Eigen::VectorXd x = r * dir;
    const double dense = hessian_min_eigenvalue(pe, x);
    const double closed = cf.rho.radial->f(r);
    CHECK(dense == doctest::Approx(closed).epsilon(1e-8));
  }
}

TEST_CASE("rho is rotation invariant for radial potentials") {
  const int n = 4;
  auto pe = radial_evaluator(n, 4.0);
  auto cf = curvature_field(MeasureSpec::from_evaluator(pe));
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd x(n), v(n);
    for (int d = 0; d < n; ++d) {
      x[d] = gauss(rng);
      v[d] = gauss(rng);
    }
    v.normalize();
    // Householder reflection: an orthogonal map
    const Eigen::MatrixXd Q =
        Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose();
    CHECK(cf.rho(Q * x) == doctest::Approx(cf.rho(x)).epsilon(1e-8));
  }
}

TEST_CASE("non-symmetric Hessians are rejected") {
  PotentialEvaluator pe;
  pe.dim = 2;
  pe.value = [](const Eigen::VectorXd&) { return 0.0; };
  pe.hessian = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd H(2, 2);
    H << 1.0, 0.5, 0.2, 1.0;
    return H;
  };
  Eigen::VectorXd x = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(hessian_min_eigenvalue(pe, x), Error);
}

TEST_CASE("rho_split sign conventions") {
  auto one = ScalarField::constant(2, 1.0);
  auto [p1, m1] = rho_split(one);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(2);
  CHECK(p1(x) == 1.0);
  CHECK(m1(x) == 0.0);

  auto neg = ScalarField::constant(2, -0.2);
  auto [p2, m2] = rho_split(neg);
  CHECK(p2(x) == 0.0);
  CHECK(m2(x) == doctest::Approx(0.2));

  auto shifted = ScalarField::from_radial(2, [](double r) { return r * r - 1.0; });
  auto [p3, m3] = rho_split(shifted);
  Eigen::VectorXd y(2);
  y << 2.0, 0.0;
  CHECK(p3(y) == doctest::Approx(3.0));
  CHECK(m3(y) == 0.0);
  CHECK(p3(y) - m3(y) == doctest::Approx(shifted(y)));
}

TEST_CASE("form-bound discount arithmetic") {
  CHECK(apply_form_bound_discount(0.4, FormBoundSpec{}) == doctest::Approx(0.4));
  CHECK(apply_form_bound_discount(0.4, make_form_bound(0.5)) == doctest::Approx(0.2));
  CHECK(apply_form_bound_discount(1.0, make_form_bound(0.25)) == doctest::Approx(0.75));
}

TEST_CASE("discount is monotone in alpha and linear in the bound") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> ua(0.0, 0.999), ub(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    double a1 = ua(rng), a2 = ua(rng), b = ub(rng);
    if (a1 > a2) std::swap(a1, a2);
    CHECK(apply_form_bound_discount(b, make_form_bound(a2)) <=
          apply_form_bound_discount(b, make_form_bound(a1)) + 1e-15);
    const double s = ub(rng);
    CHECK(apply_form_bound_discount(s * b, make_form_bound(a1)) ==
          doctest::Approx(s * apply_form_bound_discount(b, make_form_bound(a1))));
  }
  CHECK_THROWS_AS(make_form_bound(1.0), Error);
}

TEST_CASE("power-law curvature profiles carry the right floors") {
  // quadratic continuation outside R_a keeps rho constant there
  const int n = 8;
  auto m71 = MeasureSpec::power_law(4.0, 1.0, 0.5, n, PowerLawBranch::prop71);
  auto cf71 = curvature_field(m71);
  const double R = std::pow(8.0, 0.25);
  CHECK(cf71.rho.radial->f(R + 1.0) ==
        doctest::Approx(0.5 * std::pow(8.0, 0.5)).epsilon(1e-12));
  CHECK(cf71.rho.radial->f(0.5 * R) == doctest::Approx(0.25 * R * R).epsilon(1e-12));

  auto m72 = MeasureSpec::power_law(1.5, 1.0, 1.0, n, PowerLawBranch::prop72);
  auto cf72 = curvature_field(m72);
  const double R72 = std::pow(8.0, 1.0 / 1.5);
  CHECK(cf72.rho.radial->f(0.5 * R72) ==
        doctest::Approx(0.5 * std::pow(8.0, -1.0 / 3.0)).epsilon(1e-12));
  CHECK(rho_nonneg_on_probes(cf72, 3.0, 128));
}
