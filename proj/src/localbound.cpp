#include "gapcert/localbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"

namespace gapcert {

const char* to_string(LocalBoundMethod m) {
  switch (m) {
    case LocalBoundMethod::constant_floor: return "constant_floor";
    case LocalBoundMethod::capped_ratio: return "capped_ratio";
    case LocalBoundMethod::half_min: return "half_min";
    case LocalBoundMethod::shifted_k: return "shifted_k";
    case LocalBoundMethod::signed_kappa: return "signed_kappa";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Extremum {
  double value = 0.0;
  bool exact = false;
};

// Sampling range for a cell: unbounded radial ranges are cut at a tail-aware
// radius (candidate grids and sampled extrema only; quadrature has its own
// certified cutoffs).
std::pair<double, double> sample_range(const NormalizedMeasure& m, const Cell& cell) {
  auto [lo, hi] = cell.radial_range();
  if (std::isinf(hi)) hi = std::max(2.0 * m.tail_radius, 2.0 * lo + 1.0);
  return {lo, hi};
}

std::vector<double> sample_radial_values(const ScalarField& U,
                                         const NormalizedMeasure& m, const Cell& cell,
                                         int count) {
  auto [lo, hi] = sample_range(m, cell);
  std::vector<double> vals;
  vals.reserve(count + 1);
  for (int i = 0; i <= count; ++i)
    vals.push_back(U.radial->f(lo + (hi - lo) * i / count));
  return vals;
}

std::vector<double> sample_box_values(const ScalarField& U, const Cell& cell,
                                      int count) {
  std::vector<double> vals;
  vals.reserve(count);
  const int per_side = cell.dim == 1 ? count : static_cast<int>(std::sqrt(count)) + 1;
  if (cell.dim == 1) {
    for (int i = 0; i <= per_side; ++i) {
      Eigen::VectorXd x(1);
      x[0] = cell.lo[0] + (cell.hi[0] - cell.lo[0]) * i / per_side;
      vals.push_back(U.point(x));
    }
  } else {
    for (int i = 0; i <= per_side; ++i)
      for (int j = 0; j <= per_side; ++j) {
        Eigen::VectorXd x(2);
        x[0] = cell.lo[0] + (cell.hi[0] - cell.lo[0]) * i / per_side;
        x[1] = cell.lo[1] + (cell.hi[1] - cell.lo[1]) * j / per_side;
        vals.push_back(U.point(x));
      }
  }
  return vals;
}

std::vector<double> sample_values(const ScalarField& U, const NormalizedMeasure& m,
                                  const Cell& cell, int count) {
  if (U.is_radial() && cell.origin_centered())
    return sample_radial_values(U, m, cell, count);
  if (cell.shape == Cell::Shape::Box && cell.dim <= 2)
    return sample_box_values(U, cell, count);
  fail(ErrorKind::UnsupportedGeometry,
       "cannot sample field on " + cell.describe());
}

// Sampled extremum with 2x refinement until stable.
Extremum sampled_extremum(const ScalarField& U, const NormalizedMeasure& m,
                          const Cell& cell, bool want_sup) {
  double prev = want_sup ? -kInf : kInf;
  for (int count = 512; count <= 8192; count *= 2) {
    std::vector<double> vals = sample_values(U, m, cell, count);
    double cur = want_sup ? *std::max_element(vals.begin(), vals.end())
                          : *std::min_element(vals.begin(), vals.end());
    if (std::abs(cur - prev) <= 1e-9 * (1.0 + std::abs(cur))) return {cur, false};
    prev = cur;
  }
  return {prev, false};
}

Extremum field_inf(const ScalarField& U, const NormalizedMeasure& m, const Cell& cell) {
  if (U.is_radial() && cell.origin_centered()) {
    auto [lo, hi] = cell.radial_range();
    switch (U.radial->mono_on(lo, hi)) {
      case Monotonicity::constant:
        return {U.radial->f(std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi)), true};
      case Monotonicity::increasing:
        return {U.radial->f(lo), true};
      case Monotonicity::decreasing:
        if (!std::isinf(hi)) return {U.radial->f(hi), true};
        break;  // infimum sits at infinity; only a sampled value exists
      default:
        break;
    }
  }
  return sampled_extremum(U, m, cell, /*want_sup=*/false);
}

Extremum field_sup(const ScalarField& U, const NormalizedMeasure& m, const Cell& cell) {
  if (U.is_radial() && cell.origin_centered()) {
    auto [lo, hi] = cell.radial_range();
    switch (U.radial->mono_on(lo, hi)) {
      case Monotonicity::constant:
        return {U.radial->f(std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi)), true};
      case Monotonicity::decreasing:
        return {U.radial->f(lo), true};
      case Monotonicity::increasing:
        if (!std::isinf(hi)) return {U.radial->f(hi), true};
        fail(ErrorKind::UnboundedPotential,
             "increasing profile on an unbounded cell has no finite sup");
      default:
        break;
    }
  }
  return sampled_extremum(U, m, cell, /*want_sup=*/true);
}

// Evidence that U >= 0 on the cell. `exact` reflects whether the evidence is
// structural (nonnegativity tag / exact infimum) or sampled.
Extremum nonneg_evidence(const ScalarField& U, const NormalizedMeasure& m,
                         const Cell& cell) {
  if (U.nonnegative) return {0.0, true};
  Extremum inf = [&] {
    try {
      return field_inf(U, m, cell);
    } catch (const Error&) {
      return sampled_extremum(U, m, cell, false);
    }
  }();
  if (inf.value < 0)
    fail(ErrorKind::SchemaError,
         "potential is negative on the cell; this method needs U >= 0");
  return inf;
}

// mean over the cell of t(U), where t is a scalar transform
double mean_transformed(const ScalarField& U, const NormalizedMeasure& m,
                        const Cell& cell, const std::function<double(double)>& t) {
  ScalarField g;
  g.dim = U.dim;
  auto pf = U.point;
  g.point = [pf, t](const Eigen::VectorXd& x) { return t(pf(x)); };
  if (U.radial) {
    auto rf = U.radial->f;
    g.radial = RadialProfile([rf, t](double r) { return t(rf(r)); },
                             Monotonicity::unknown);
  }
  return mean_over_cell(g, m, cell);
}

} // namespace

double harmonic_product(double a, double b) { return a * b / (a + b); }

LocalBoundReport bound_constant_floor(const ScalarField& U, const Cell& cell,
                                      const NormalizedMeasure& measure) {
  Extremum inf = field_inf(U, measure, cell);
  if (!inf.exact)
    fail(ErrorKind::UncertifiedInfimum,
         "infimum on " + cell.describe() + " is only sampled");
  LocalBoundReport r;
  r.cell = cell;
  r.method = LocalBoundMethod::constant_floor;
  r.delta_mean = inf.value;
  r.value = inf.value;
  r.certified = true;
  return r;
}

LocalBoundReport bound_capped_ratio(const ScalarField& U, const Cell& cell,
                                    const PoincareEstimate& p,
                                    const NormalizedMeasure& measure) {
  Extremum nn = nonneg_evidence(U, measure, cell);
  Extremum sup = field_sup(U, measure, cell);
  if (std::isinf(sup.value))
    fail(ErrorKind::UnboundedPotential, "sup U is infinite; cap U first");
  const double mean = mean_over_cell(U, measure, cell);
  LocalBoundReport r;
  r.cell = cell;
  r.method = LocalBoundMethod::capped_ratio;
  r.lambda1K = p;
  r.delta_mean = mean;
  r.value = p.lambda1 * mean / (p.lambda1 + 2.0 * sup.value);
  r.certified = p.certified && nn.exact && sup.exact;
  return r;
}

LocalBoundReport bound_half_min(const ScalarField& U, const Cell& cell,
                                const PoincareEstimate& p,
                                const NormalizedMeasure& measure) {
  Extremum nn = nonneg_evidence(U, measure, cell);
  const double cap = 0.5 * p.lambda1;
  const double mean =
      mean_transformed(U, measure, cell, [cap](double u) { return std::min(cap, u); });
  LocalBoundReport r;
  r.cell = cell;
  r.method = LocalBoundMethod::half_min;
  r.lambda1K = p;
  r.delta_mean = mean;
  r.value = 0.5 * mean;
  r.certified = p.certified && nn.exact;
  return r;
}

// Best available lower bound on inf_cell U: the exact/sampled infimum, with
// the structural nonnegativity tag as a certified floor.
Extremum inf_floor(const ScalarField& U, const NormalizedMeasure& m, const Cell& cell) {
  Extremum inf{-kInf, false};
  try {
    inf = field_inf(U, m, cell);
  } catch (const Error&) {
  }
  if (U.nonnegative && !(inf.value >= 0)) inf = {0.0, true};
  return inf;
}

LocalBoundReport bound_shifted_k(const ScalarField& U, const Cell& cell,
                                 const PoincareEstimate& p,
                                 const NormalizedMeasure& measure,
                                 const std::vector<double>& k_grid) {
  const Extremum inf = inf_floor(U, measure, cell);
  const double cap = 0.5 * p.lambda1;
  LocalBoundReport best;
  best.value = -kInf;
  bool any = false;
  for (double k : k_grid) {
    if (k < 0 || k > inf.value + 1e-15 * (1 + std::abs(inf.value))) continue;
    const double mean = mean_transformed(
        U, measure, cell, [cap, k](double u) { return std::min(cap, u - k); });
    const double value = k + 0.5 * mean;
    if (!any || value > best.value) {
      best.cell = cell;
      best.method = LocalBoundMethod::shifted_k;
      best.lambda1K = p;
      best.delta_mean = mean;
      best.k_used = k;
      best.value = value;
      best.certified = p.certified && inf.exact;
      any = true;
    }
  }
  if (!any) fail(ErrorKind::EmptyFeasibleGrid, "no feasible k candidate");
  return best;
}

LocalBoundReport bound_signed_kappa(const ScalarField& U, const Cell& cell,
                                    const PoincareEstimate& p,
                                    const NormalizedMeasure& measure,
                                    const std::vector<double>& kappa_grid,
                                    const std::vector<double>& k_grid) {
  const Extremum inf = inf_floor(U, measure, cell);
  if (std::isinf(inf.value))
    fail(ErrorKind::EmptyFeasibleGrid, "negative part of U has no computable sup");
  const double cap = 0.5 * p.lambda1;
  LocalBoundReport best;
  best.value = -kInf;
  bool any = false;
  for (double k : k_grid) {
    if (k < 0) continue;
    // sup (U-k)^- = max(0, k - inf U)
    const double neg_sup = std::max(0.0, k - inf.value);
    for (double kappa : kappa_grid) {
      if (!(kappa > 0 && kappa < 1)) continue;
      if (neg_sup > (1.0 - kappa) * cap) continue;  // feasibility
      const double mean = mean_transformed(U, measure, cell, [cap, k, kappa](double u) {
        const double plus = std::max(u - k, 0.0);
        const double minus = std::max(k - u, 0.0);
        return std::min(cap, plus) - minus / kappa;
      });
      const double value = k + 0.5 * mean;
      if (!any || value > best.value) {
        best.cell = cell;
        best.method = LocalBoundMethod::signed_kappa;
        best.lambda1K = p;
        best.delta_mean = mean;
        best.k_used = k;
        best.kappa_used = kappa;
        best.value = value;
        best.certified = p.certified && (inf.exact || U.nonnegative);
        any = true;
      }
    }
  }
  if (!any) fail(ErrorKind::EmptyFeasibleGrid, "no feasible (kappa, k) candidate");
  return best;
}

std::vector<double> default_k_grid(const ScalarField& U, const Cell& cell,
                                   const NormalizedMeasure& measure, int size) {
  std::vector<double> vals;
  try {
    vals = sample_values(U, measure, cell, 512);
  } catch (const Error&) {
    return {0.0};
  }
  std::sort(vals.begin(), vals.end());
  std::vector<double> grid{0.0};
  for (int j = 0; j < size; ++j) {
    double q = vals[static_cast<size_t>(
        std::min<double>(vals.size() - 1.0, std::floor(vals.size() * (double)j / size)))];
    if (q > 0 && (grid.empty() || std::abs(q - grid.back()) > 1e-12 * (1 + q)))
      grid.push_back(q);
  }
  return grid;
}

LocalBoundReport best_local_bound(const ScalarField& U, const Cell& cell,
                                  const PoincareEstimate& p,
                                  const NormalizedMeasure& measure,
                                  const LocalBoundConfig& config) {
  const std::vector<double> k_grid =
      config.k_grid ? *config.k_grid
                    : default_k_grid(U, cell, measure, config.k_grid_size);
  // evaluation order doubles as the tie-break order
  const LocalBoundMethod order[] = {
      LocalBoundMethod::constant_floor, LocalBoundMethod::shifted_k,
      LocalBoundMethod::signed_kappa, LocalBoundMethod::half_min,
      LocalBoundMethod::capped_ratio};
  std::optional<LocalBoundReport> best;
  for (LocalBoundMethod m : order) {
    if (std::find(config.methods_enabled.begin(), config.methods_enabled.end(), m) ==
        config.methods_enabled.end())
      continue;
    try {
      LocalBoundReport r;
      switch (m) {
        case LocalBoundMethod::constant_floor:
          r = bound_constant_floor(U, cell, measure);
          break;
        case LocalBoundMethod::shifted_k:
          r = bound_shifted_k(U, cell, p, measure, k_grid);
          break;
        case LocalBoundMethod::signed_kappa:
          r = bound_signed_kappa(U, cell, p, measure, config.kappa_grid, k_grid);
          break;
        case LocalBoundMethod::half_min:
          r = bound_half_min(U, cell, p, measure);
          break;
        case LocalBoundMethod::capped_ratio:
          r = bound_capped_ratio(U, cell, p, measure);
          break;
      }
      if (!best || r.value > best->value) best = r;
    } catch (const Error&) {
      // method preconditions not met on this cell; try the next one
    }
  }
  if (!best) fail(ErrorKind::NoApplicableMethod,
                  "no local bound method applies on " + cell.describe());
  return *best;
}

} // namespace gapcert
