#pragma once

#include "gapcert/covering.hpp"
#include "gapcert/measure.hpp"

namespace gapcert {

/// Parameters of the exponential-power measure family and its one-sided
/// perturbation classes. `prop71` covers alpha >= 2 (power profile inside
/// B(0,R_a)), `prop72` covers 1 < alpha <= 2 (power profile outside), `pure`
/// is the unperturbed family.
struct PowerLawSpec {
  double alpha = 2.0;
  double a = 1.0;
  double c = 1.0;
  int n = 1;
  PowerLawBranch branch = PowerLawBranch::pure;

  double R_a() const;  // (a n)^(1/alpha)
  void validate() const;
  MeasureSpec measure() const;
};

/// I_{alpha,n,R,gamma} = Integral_0^R r^gamma r^(n-1) e^(-r^alpha/alpha) dr,
/// computed after the substitution y = r^alpha/alpha and entirely in the log
/// domain (large n would overflow otherwise). R may be +inf.
double i_integral_log(double alpha, double n, double R, double gamma);
double i_integral(double alpha, double n, double R, double gamma);

/// Companion integral over [R, inf).
double itilde_integral_log(double alpha, double n, double R, double gamma);
double itilde_integral(double alpha, double n, double R, double gamma);

/// Large-n limit of the ratio I_{alpha,n,R_a,gamma} / I_{alpha,n,R_a,0}:
/// min(a,1)^(gamma/alpha). Set `tilde` for the reversed branch of the
/// [R_a, inf) integrals: max(a,1)^(gamma/alpha).
double laplace_ratio_asymptotic(double alpha, double a, double gamma,
                                bool tilde = false);

struct MeanRhoBall {
  double ratio;       // exact quadrature ratio
  double asymptotic;  // (a n)^(1-2/alpha) for a < 1, n^(1-2/alpha) for a >= 1
};

/// Mean of rho(r) = r^(alpha-2) over B(0,R_a) under the power-law weight,
/// both as an exact integral ratio and as its dimensional asymptotic.
/// Requires alpha >= 2.
MeanRhoBall mean_rho_ball(double alpha, int n, double a);

/// The dimension-dependent factor of the alpha >= 2 lower bound:
/// min(1/(4a), 1/2, c) (a n)^(1-2/alpha) for a <= 1,
/// min(1/4, c a^(1-2/alpha)) n^(1-2/alpha) for a > 1.
double prop71_bracket(const PowerLawSpec& spec);

/// The 1 < alpha <= 2 counterpart:
/// min(1/(4a), (alpha-1)/2, c(alpha-1)) (a n)^(1-2/alpha) for a >= 1,
/// min(1/4, (alpha-1)/2, c a^(1-2/alpha)(alpha-1)) n^(1-2/alpha) for a < 1.
double prop72_bracket(const PowerLawSpec& spec);

/// Certified counterpart of the bracket formulas: two-piece covering at R_a,
/// Poincare inputs from the radial gap bracket, curvature floors and cell
/// means from the measure itself. No unknown universal constant remains.
GlobalBoundReport assemble_two_piece_bound(const PowerLawSpec& spec,
                                           const BoundConfig& config = {});

} // namespace gapcert
