#pragma once

#include <Eigen/Core>

namespace gapcert {

/// x^(1 - 2/alpha) evaluated through long double so that exactly
/// representable results (exponent 0, or cases like 8^(-1/3) = 0.5) come out
/// bit-exact in binary64.
double dim_power(double x, double alpha);

/// k-th point of the Halton sequence in [0,1)^dim (deterministic quasi-random
/// probes for coverage checks).
Eigen::VectorXd halton_point(int k, int dim);

} // namespace gapcert
