#include "gapcert/numerics.hpp"

#include <cmath>

namespace gapcert {

double dim_power(double x, double alpha) {
  const long double e = 1.0L - 2.0L / static_cast<long double>(alpha);
  if (e == 0.0L) return 1.0;
  return static_cast<double>(std::pow(static_cast<long double>(x), e));
}

Eigen::VectorXd halton_point(int k, int dim) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  Eigen::VectorXd p(dim);
  for (int d = 0; d < dim; ++d) {
    const int base = primes[d % 8];
    double f = 1.0, x = 0.0;
    int i = k + 1;
    while (i > 0) {
      f /= base;
      x += f * (i % base);
      i /= base;
    }
    p[d] = x;
  }
  return p;
}

} // namespace gapcert
