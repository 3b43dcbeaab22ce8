#include <doctest.h>

#include <cmath>
#include <random>

#include "gapcert/errors.hpp"
#include "gapcert/numerics.hpp"
#include "gapcert/powerlaw.hpp"

using namespace gapcert;

namespace {

// closed form for the full-range integral: alpha^{s-1} Gamma(s), s=(n+g)/alpha
double log_i_total(double alpha, double n, double g) {
  const double s = (n + g) / alpha;
  return (s - 1.0) * std::log(alpha) + std::lgamma(s);
}

} // namespace

TEST_CASE("i_integral: half-Gaussian and Gamma anchors") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(i_integral(2, 1, inf, 0) == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-10));
  CHECK(i_integral(1, 3, inf, 0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(i_integral(2, 2, inf, 2) / i_integral(2, 2, inf, 0) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("i_integral matches the Gamma closed form, including large n") {
  const double inf = std::numeric_limits<double>::infinity();
  for (double alpha : {1.0, 2.0, 3.5}) {
    for (double n : {1.0, 4.0, 64.0, 300.0}) {
      for (double g : {0.0, 2.0, alpha - 2.0}) {
        if (!(g > -n)) continue;
        CHECK(i_integral_log(alpha, n, inf, g) ==
              doctest::Approx(log_i_total(alpha, n, g)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("itilde anchors") {
  CHECK(itilde_integral(1, 1, 0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  // Integral_3^inf r e^{-r^2/2} dr = e^{-4.5}
  CHECK(itilde_integral(2, 2, 3, 0) == doctest::Approx(std::exp(-4.5)).epsilon(1e-9));
}

TEST_CASE("additivity: I + Itilde equals the full integral") {
  std::mt19937 rng(0xC0FFEE);
  std::uniform_real_distribution<double> ua(1.0, 4.0), ur(0.2, 6.0), ug(-0.5, 3.0);
  std::uniform_int_distribution<int> un(1, 120);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const double alpha = ua(rng), R = ur(rng), g = ug(rng);
    const double n = un(rng);
    const double lo = i_integral_log(alpha, n, R, g);
    const double hi = itilde_integral_log(alpha, n, R, g);
    const double total = i_integral_log(alpha, n, inf, g);
    const double sum = std::max(lo, hi) + std::log1p(std::exp(-std::abs(lo - hi)));
    CHECK(sum == doctest::Approx(total).epsilon(1e-9));
  }
}

TEST_CASE("laplace ratio limits") {
  CHECK(laplace_ratio_asymptotic(4.0, 0.5, 2.0) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(laplace_ratio_asymptotic(4.0, 1.7, 2.0) == 1.0);
  CHECK(laplace_ratio_asymptotic(3.0, 0.4, 0.0) == 1.0);
  CHECK(laplace_ratio_asymptotic(4.0, 2.0, 2.0, /*tilde=*/true) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(laplace_ratio_asymptotic(4.0, 0.5, 2.0, /*tilde=*/true) == 1.0);
}

TEST_CASE("mean_rho_ball: alpha=2 ratio is one") {
  auto out = mean_rho_ball(2.0, 13, 0.7);
  CHECK(out.ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(out.asymptotic == 1.0);
}

TEST_CASE("mean_rho_ball approaches its dimensional asymptotic") {
  auto a = mean_rho_ball(4.0, 200, 0.5);
  CHECK(a.asymptotic == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(std::abs(a.ratio / a.asymptotic - 1.0) <= 0.05);

  auto b = mean_rho_ball(3.0, 200, 2.0);
  CHECK(b.asymptotic == doctest::Approx(std::pow(200.0, 1.0 / 3.0)).epsilon(1e-12));
  CHECK(std::abs(b.ratio / b.asymptotic - 1.0) <= 0.05);
}

TEST_CASE("laplace convergence across the (alpha, a) grid at n=200") {
  for (double alpha : {2.0, 3.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      auto out = mean_rho_ball(alpha, 200, a);
      CHECK(std::abs(out.ratio / out.asymptotic - 1.0) <= 0.05);
    }
  }
}

TEST_CASE("bracket formulas: pinned arithmetic") {
  CHECK(prop71_bracket({2.0, 1.0, 1.0, 10, PowerLawBranch::prop71}) == 0.25);
  CHECK(prop72_bracket({1.5, 1.0, 1.0, 8, PowerLawBranch::prop72}) == 0.125);

  const double b = prop71_bracket({4.0, 2.0, 0.1, 16, PowerLawBranch::prop71});
  CHECK(b == doctest::Approx(std::min(0.25, 0.1 * std::sqrt(2.0)) * 4.0).epsilon(1e-14));
  CHECK(b == doctest::Approx(0.5657).epsilon(2e-4));

  // exponent vanishes at alpha = 2: constant in n
  for (int n : {2, 10, 100})
    CHECK(prop71_bracket({2.0, 0.7, 1.0, n, PowerLawBranch::prop71}) ==
          doctest::Approx(std::min(0.25 / 0.7, 0.5)).epsilon(1e-14));
  for (int n : {2, 10, 100})
    CHECK(prop72_bracket({2.0, 1.0, 1.0, n, PowerLawBranch::prop72}) == 0.25);

  // a < 1 branch of the subquadratic bracket
  const double c3 = dim_power(0.25, 1.5) * 0.5;  // 0.25^{-1/3} * (alpha-1)
  CHECK(c3 > 0.25);
  CHECK(prop72_bracket({1.5, 0.25, 1.0, 8, PowerLawBranch::prop72}) ==
        doctest::Approx(0.25 * dim_power(8.0, 1.5)).epsilon(1e-14));
  CHECK(prop72_bracket({1.5, 0.25, 1.0, 8, PowerLawBranch::prop72}) ==
        doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("bracket positivity across random valid specs") {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> ua(0.1, 3.0), uc(0.01, 1.0);
  std::uniform_int_distribution<int> un(1, 80);
  for (int i = 0; i < 100; ++i) {
    PowerLawSpec s71{2.0 + 2.5 * uc(rng), ua(rng), uc(rng), un(rng),
                     PowerLawBranch::prop71};
    CHECK(prop71_bracket(s71) > 0.0);
    PowerLawSpec s72{1.0 + 0.999 * uc(rng), ua(rng), uc(rng), un(rng),
                     PowerLawBranch::prop72};
    s72.alpha = std::min(s72.alpha, 2.0);
    if (s72.alpha <= 1.0) s72.alpha = 1.5;
    CHECK(prop72_bracket(s72) > 0.0);
  }
}

TEST_CASE("branch mismatches are rejected") {
  CHECK_THROWS_AS(prop71_bracket({1.5, 1.0, 1.0, 8, PowerLawBranch::prop71}), Error);
  CHECK_THROWS_AS(prop71_bracket({2.0, 1.0, 1.0, 8, PowerLawBranch::pure}), Error);
  CHECK_THROWS_AS(prop72_bracket({3.0, 1.0, 1.0, 8, PowerLawBranch::prop72}), Error);
  CHECK_THROWS_AS(mean_rho_ball(1.5, 8, 1.0), Error);
}
