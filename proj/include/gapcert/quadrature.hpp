#pragma once

#include <functional>

namespace gapcert::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 20000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  int intervals = 0;
};

/// Adaptive Gauss–Kronrod (G7/K15) integration of f over the finite interval
/// [a, b]. Splits the interval with the largest embedded-rule discrepancy
/// until the accumulated error estimate drops below
/// max(rel_tol*|value|, abs_tol). Deterministic for a given integrand.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

struct LogResult {
  double log_value = 0.0;  // log of the (positive) integral
  double rel_error = 0.0;
  bool converged = false;
  int intervals = 0;
};

/// Integrates exp(g) over [a, b] entirely in the log domain, so g may reach
/// magnitudes far beyond log(DBL_MAX). g is allowed to return -infinity.
/// Intended for weights of the form (n-1)*log r - W(r) with large n.
LogResult integrate_log(const std::function<double(double)>& g, double a, double b,
                        const Options& opt = {});

/// Smallest b >= start such that g(b) <= g_peak - drop, found by doubling the
/// offset from `start`. Used to truncate integrals of exp(g) with eventually
/// decreasing g.
double decay_cutoff(const std::function<double(double)>& g, double start, double g_peak,
                    double drop);

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

} // namespace gapcert::quad
