#include "gapcert/field.hpp"

#include <algorithm>
#include <cmath>

namespace gapcert {

Monotonicity RadialProfile::mono_on(double lo, double hi) const {
  if (piece_mono.empty()) return Monotonicity::unknown;
  // piece index of a radius
  auto piece_of = [&](double r) {
    return static_cast<size_t>(
        std::upper_bound(breaks.begin(), breaks.end(), r) - breaks.begin());
  };
  size_t p0 = piece_of(lo);
  // hi may be +inf; the last piece owns it
  size_t p1 = std::isinf(hi) ? piece_mono.size() - 1 : piece_of(hi);
  Monotonicity m = piece_mono[p0];
  for (size_t p = p0 + 1; p <= p1 && p < piece_mono.size(); ++p) {
    if (piece_mono[p] != m) return Monotonicity::unknown;
  }
  return m;
}

ScalarField ScalarField::constant(int dim, double c) {
  ScalarField f;
  f.dim = dim;
  f.point = [c](const Eigen::VectorXd&) { return c; };
  f.radial = RadialProfile([c](double) { return c; }, Monotonicity::constant);
  f.nonnegative = c >= 0;
  return f;
}

ScalarField ScalarField::from_radial(int dim, std::function<double(double)> fn,
                                     Monotonicity mono, bool nonneg) {
  ScalarField f;
  f.dim = dim;
  auto g = fn;
  f.point = [g](const Eigen::VectorXd& x) { return g(x.norm()); };
  f.radial = RadialProfile(std::move(fn), mono);
  f.nonnegative = nonneg;
  return f;
}

ScalarField ScalarField::from_point(int dim,
                                    std::function<double(const Eigen::VectorXd&)> fn) {
  ScalarField f;
  f.dim = dim;
  f.point = std::move(fn);
  return f;
}

} // namespace gapcert
