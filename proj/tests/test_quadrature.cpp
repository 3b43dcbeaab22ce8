#include <doctest.h>

#include <cmath>

#include "gapcert/quadrature.hpp"

using namespace gapcert;

TEST_CASE("adaptive panels hit analytic integrals") {
  auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  r = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("kinked integrands are resolved by subdivision") {
  // integral of min(x,1) over [0,2] = 1/2 + 1 = 3/2
  auto r = quad::integrate([](double x) { return std::min(x, 1.0); }, 0.0, 2.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("log-domain integration survives huge offsets") {
  // Integral exp(S - x^2) dx over [-10,10] = e^S sqrt(pi)
  for (double S : {0.0, 500.0, -500.0}) {
    auto r = quad::integrate_log([S](double x) { return S - x * x; }, -10.0, 10.0);
    CHECK(r.converged);
    CHECK(r.log_value == doctest::Approx(S + 0.5 * std::log(M_PI)).epsilon(1e-11));
  }
}

TEST_CASE("log-domain handles vanishing regions") {
  const double ninf = -std::numeric_limits<double>::infinity();
  auto g = [ninf](double x) { return x < 1.0 ? ninf : 0.0; };
  auto r = quad::integrate_log(g, 0.0, 3.0);
  CHECK(r.converged);
  CHECK(std::exp(r.log_value) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("log_add basics") {
  CHECK(quad::log_add(std::log(2.0), std::log(3.0)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-14));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(quad::log_add(ninf, 1.5) == 1.5);
}

TEST_CASE("decay cutoff finds the required drop") {
  auto g = [](double x) { return -x; };
  const double b = quad::decay_cutoff(g, 0.0, 0.0, 50.0);
  CHECK(g(b) <= -50.0);
}
