#include <doctest.h>

#include <cmath>
#include <random>

#include "gapcert/errors.hpp"
#include "gapcert/measure.hpp"

using namespace gapcert;

namespace {

// Gamma-function oracles for the power-law family: total mass of
// e^{-r^alpha/alpha} r^{n-1} dr is alpha^{(n/alpha)-1} Gamma(n/alpha), and
// E|x|^g = alpha^{g/alpha} Gamma((n+g)/alpha) / Gamma(n/alpha).
double log_power_law_Z(double alpha, int n) {
  const double s = n / alpha;
  return log_sphere_surface(n) + (s - 1.0) * std::log(alpha) + std::lgamma(s);
}

double power_law_moment(double alpha, int n, double g) {
  return std::exp((g / alpha) * std::log(alpha) + std::lgamma((n + g) / alpha) -
                  std::lgamma(static_cast<double>(n) / alpha));
}

} // namespace

TEST_CASE("normalize: Gaussian n=1 gives log sqrt(2 pi)") {
  auto nm = normalize(MeasureSpec::gaussian(1));
  CHECK(nm.log_Z == doctest::Approx(0.5 * std::log(2.0 * M_PI)).epsilon(1e-10));
  CHECK(nm.log_Z == doctest::Approx(0.9189385332046727).epsilon(1e-10));
}

TEST_CASE("normalize: alpha=2 matches the Gaussian for any n") {
  for (int n : {1, 2, 5}) {
    auto nm = normalize(MeasureSpec::power_law(2.0, 1.0, 1.0, n));
    CHECK(nm.log_Z == doctest::Approx(0.5 * n * std::log(2.0 * M_PI)).epsilon(1e-10));
  }
}

TEST_CASE("normalize: exponential measure in R^3 has Z = 4 pi Gamma(3)") {
  auto nm = normalize(MeasureSpec::power_law(1.0, 1.0, 1.0, 3));
  CHECK(std::exp(nm.log_Z) == doctest::Approx(8.0 * M_PI).epsilon(1e-9));
  CHECK(std::exp(nm.log_Z) == doctest::Approx(25.13274122871834).epsilon(1e-9));
}

TEST_CASE("normalize: gamma-function oracle across the family") {
  for (double alpha : {1.0, 1.5, 3.0, 4.0}) {
    for (int n : {1, 2, 8, 40}) {
      auto nm = normalize(MeasureSpec::power_law(alpha, 1.0, 1.0, n));
      CHECK(nm.log_Z == doctest::Approx(log_power_law_Z(alpha, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("normalize: total mass lands inside the eps_tail window") {
  auto nm = normalize(MeasureSpec::power_law(3.0, 1.0, 1.0, 4), 1e-10);
  const double mass = total_mass(nm);
  CHECK(mass >= 1.0 - 1e-9);
  CHECK(mass <= 1.0 + 1e-9);
}

TEST_CASE("normalize: tail radius certificate") {
  auto nm = normalize(MeasureSpec::gaussian(3));
  // mass outside tail_radius under the oracle closed form
  const double r = nm.tail_radius;
  CHECK(r > 0);
  const double inside = mass_of_cell(nm, Cell::ball0(3, r));
  CHECK(1.0 - inside <= 10 * nm.eps_tail);
}

TEST_CASE("normalize is idempotent") {
  auto nm1 = normalize(MeasureSpec::power_law(1.5, 1.0, 1.0, 5));
  auto nm2 = normalize(nm1.base);
  CHECK(std::abs(nm1.log_Z - nm2.log_Z) <= 1e-10);
}

TEST_CASE("normalize rejects non-integrable measures") {
  auto lebesgue = MeasureSpec::custom_radial(
      2, [](double) { return 0.0; }, [](double) { return 0.0; });
  CHECK_THROWS_AS(normalize(lebesgue), Error);
  try {
    normalize(lebesgue);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonIntegrable);
  }

  PotentialEvaluator pe;
  pe.dim = 2;
  pe.value = [](const Eigen::VectorXd&) { return 0.0; };
  CHECK_THROWS_AS(normalize(MeasureSpec::from_evaluator(pe)), Error);
}

TEST_CASE("normalize validates eps_tail") {
  CHECK_THROWS_AS(normalize(MeasureSpec::gaussian(1), 1e-3), Error);
}

TEST_CASE("normalize: evaluator path agrees with the radial path") {
  PotentialEvaluator pe;
  pe.dim = 2;
  pe.value = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
  auto nm = normalize(MeasureSpec::from_evaluator(pe), 1e-8);
  CHECK(nm.log_Z == doctest::Approx(std::log(2.0 * M_PI)).epsilon(1e-7));
}

TEST_CASE("moment: Gaussian second moment is the dimension") {
  auto nm = normalize(MeasureSpec::gaussian(2));
  CHECK(moment(nm, Cell::full_space(2), 2.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("moment: exponential measure gamma-ratio") {
  auto nm = normalize(MeasureSpec::power_law(1.0, 1.0, 1.0, 3));
  CHECK(moment(nm, Cell::full_space(3), 2.0) ==
        doctest::Approx(power_law_moment(1.0, 3, 2.0)).epsilon(1e-9));
  CHECK(moment(nm, Cell::full_space(3), 2.0) == doctest::Approx(12.0).epsilon(1e-9));
}

TEST_CASE("moment: mu_4 in R^8") {
  auto nm = normalize(MeasureSpec::power_law(4.0, 1.0, 1.0, 8));
  const double oracle = power_law_moment(4.0, 8, 2.0);
  CHECK(moment(nm, Cell::full_space(8), 2.0) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(oracle == doctest::Approx(2.6587).epsilon(2e-4));
}

TEST_CASE("moment monotonicity in gamma outside the unit ball") {
  auto nm = normalize(MeasureSpec::power_law(2.0, 1.0, 1.0, 3));
  const Cell outside = Cell::ball_complement(3, 1.0);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> g(0.0, 4.0);
  for (int i = 0; i < 10; ++i) {
    double g1 = g(rng), g2 = g(rng);
    if (g1 > g2) std::swap(g1, g2);
    CHECK(moment(nm, outside, g1) <= moment(nm, outside, g2) * (1 + 1e-9));
  }
}

TEST_CASE("mean_over_cell: constants average to themselves") {
  auto nm = normalize(MeasureSpec::gaussian(3));
  const ScalarField three = ScalarField::constant(3, 3.0);
  CHECK(mean_over_cell(three, nm, Cell::ball0(3, 2.0)) ==
        doctest::Approx(3.0).epsilon(1e-10));
  CHECK(mean_over_cell(three, nm, Cell::ball_complement(3, 2.0)) ==
        doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("mean_over_cell: min(V, 0) for a nonnegative potential") {
  auto nm = normalize(MeasureSpec::gaussian(2));
  auto f = ScalarField::from_radial(
      2, [](double r) { return std::min(0.5 * r * r, 0.0); });
  CHECK(mean_over_cell(f, nm, Cell::ball0(2, 3.0)) == doctest::Approx(0.0));
}

TEST_CASE("mean_over_cell: quartic curvature mean on the critical ball") {
  // rho(r) = r^2 for W = r^4/4; on B(0,(an)^{1/4}) the mean approaches
  // sqrt(a n) from below as n grows (long-double Simpson oracle below)
  const int n = 20;
  const double R = std::pow(20.0, 0.25);
  auto nm = normalize(MeasureSpec::power_law(4.0, 1.0, 1.0, n));
  auto rho = ScalarField::from_radial(n, [](double r) { return r * r; });
  const double mean = mean_over_cell(rho, nm, Cell::ball0(n, R));

  // brute-force oracle in the substituted variable y = r^4/4:
  // I_gamma = Integral_0^{Y} (4y)^{(gamma+n-4)/4} e^{-y} dy
  auto brute = [&](double gamma) {
    const long double Y = std::pow((long double)R, 4.0L) / 4.0L;
    const int m = 400000;
    long double sum = 0.0L;
    const long double h = Y / m;
    for (int i = 0; i <= m; ++i) {
      const long double y = i * h;
      const long double f =
          y > 0 ? std::pow(4.0L * y, (long double)(gamma + n - 4) / 4.0L) * std::exp(-y)
                : 0.0L;
      sum += (i == 0 || i == m) ? f : (i % 2 ? 4.0L * f : 2.0L * f);
    }
    return sum * h / 3.0L;
  };
  const double oracle = static_cast<double>(brute(2.0) / brute(0.0));
  CHECK(mean == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(mean == doctest::Approx(std::sqrt(n - 4.0)).epsilon(0.10));
}

TEST_CASE("splitting identity across a two-piece partition") {
  auto nm = normalize(MeasureSpec::power_law(4.0, 1.0, 1.0, 5));
  auto f = ScalarField::from_radial(5, [](double r) { return r * r; });
  const double R = 1.3;
  const double mB = mass_of_cell(nm, Cell::ball0(5, R));
  const double mC = mass_of_cell(nm, Cell::ball_complement(5, R));
  CHECK(mB + mC == doctest::Approx(1.0).epsilon(1e-9));
  const double lhs = mB * mean_over_cell(f, nm, Cell::ball0(5, R)) +
                     mC * mean_over_cell(f, nm, Cell::ball_complement(5, R));
  const double rhs = mean_over_cell(f, nm, Cell::full_space(5));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("mean_over_cell: 1D asymmetric interval via the grid path") {
  auto nm = normalize(MeasureSpec::gaussian(1));
  Eigen::VectorXd lo(1), hi(1);
  lo << 0.5, hi << 1.5;
  auto f = ScalarField::from_point(1, [](const Eigen::VectorXd& x) { return x[0]; });
  const double got = mean_over_cell(f, nm, Cell::box(lo, hi));
  // oracle: Integral x e^{-x^2/2} / Integral e^{-x^2/2} on [0.5, 1.5]
  const double num = std::exp(-0.125) - std::exp(-1.125);
  const double den = std::sqrt(M_PI / 2.0) *
                     (std::erf(1.5 / std::sqrt(2.0)) - std::erf(0.5 / std::sqrt(2.0)));
  CHECK(got == doctest::Approx(num / den).epsilon(1e-8));
}

TEST_CASE("unsupported geometry is reported") {
  PotentialEvaluator pe;
  pe.dim = 2;
  pe.value = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
  auto nm = normalize(MeasureSpec::from_evaluator(pe), 1e-8);
  auto f = ScalarField::constant(2, 1.0);
  CHECK_THROWS_AS(mean_over_cell(f, nm, Cell::ball0(2, 1.0)), Error);
}
