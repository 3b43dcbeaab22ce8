#include "gapcert/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"
#include "gapcert/numerics.hpp"

namespace gapcert {

const char* to_string(CoveringKind k) {
  switch (k) {
    case CoveringKind::two_piece: return "two_piece";
    case CoveringKind::ball_lattice: return "ball_lattice";
    case CoveringKind::box_partition: return "box_partition";
  }
  return "?";
}

Covering two_piece_covering(double R, int dim) {
  if (!(R > 0)) fail(ErrorKind::SchemaError, "covering radius must be positive");
  Covering c;
  c.kind = CoveringKind::two_piece;
  c.radius_param = R;
  c.cells = {Cell::ball0(dim, R), Cell::ball_complement(dim, R)};
  c.overlap_N = 1;
  return c;
}

Covering ball_lattice_covering(const Cell& box, double R, std::optional<double> pitch) {
  if (box.shape != Cell::Shape::Box)
    fail(ErrorKind::SchemaError, "ball lattice needs a Box region");
  const int n = box.dim;
  if (n > 2)
    fail(ErrorKind::UnsupportedGeometry, "ball lattice restricted to dim <= 2");
  if (!(R > 0)) fail(ErrorKind::SchemaError, "covering radius must be positive");

  const double critical = 2.0 * R / std::sqrt(static_cast<double>(n));
  const double p = pitch.value_or(critical * (1.0 - 1e-9));
  if (p > critical)
    fail(ErrorKind::PitchTooCoarse,
         "pitch exceeds 2R/sqrt(n); lattice cells would poke out of the balls");

  Covering c;
  c.kind = CoveringKind::ball_lattice;
  c.radius_param = R;
  c.truncation_box = box;

  // degenerate box: a single ball
  bool degenerate = false;
  for (int d = 0; d < n; ++d)
    if (box.hi[d] - box.lo[d] <= 0) degenerate = true;
  if (degenerate) {
    Eigen::VectorXd center = 0.5 * (box.lo + box.hi);
    c.cells = {Cell::ball(center, R)};
    c.overlap_N = 1;
    return c;
  }

  std::vector<int> counts(n);
  long total = 1;
  for (int d = 0; d < n; ++d) {
    counts[d] = static_cast<int>(std::floor((box.hi[d] - box.lo[d]) / p)) + 1;
    total *= counts[d];
    if (total > 200000)
      fail(ErrorKind::PitchTooCoarse, "lattice would need more than 2e5 balls");
  }
  if (n == 1) {
    for (int i = 0; i < counts[0]; ++i) {
      Eigen::VectorXd x(1);
      x[0] = box.lo[0] + i * p;
      c.cells.push_back(Cell::ball(x, R));
    }
  } else {
    for (int i = 0; i < counts[0]; ++i)
      for (int j = 0; j < counts[1]; ++j) {
        Eigen::VectorXd x(2);
        x[0] = box.lo[0] + i * p;
        x[1] = box.lo[1] + j * p;
        c.cells.push_back(Cell::ball(x, R));
      }
  }

  // exact overlap count at the deepest point of a lattice cell (its corner):
  // lattice points within distance R of (p/2, ..., p/2)
  int overlap = 0;
  const int span = static_cast<int>(std::ceil(R / p)) + 1;
  if (n == 1) {
    for (int i = -span; i <= span + 1; ++i)
      if (std::abs(i * p - 0.5 * p) <= R) ++overlap;
  } else {
    for (int i = -span; i <= span + 1; ++i)
      for (int j = -span; j <= span + 1; ++j) {
        const double dx = i * p - 0.5 * p, dy = j * p - 0.5 * p;
        if (std::hypot(dx, dy) <= R) ++overlap;
      }
  }
  c.overlap_N = std::max(1, overlap);
  return c;
}

Covering box_partition_covering(const Cell& box, const std::vector<int>& counts) {
  if (box.shape != Cell::Shape::Box)
    fail(ErrorKind::SchemaError, "box partition needs a Box region");
  if (static_cast<int>(counts.size()) != box.dim)
    fail(ErrorKind::SchemaError, "one slab count per axis required");
  for (int c : counts)
    if (c < 1) fail(ErrorKind::SchemaError, "slab counts must be >= 1");
  Covering cov;
  cov.kind = CoveringKind::box_partition;
  cov.truncation_box = box;
  cov.overlap_N = 1;
  std::vector<int> idx(box.dim, 0);
  while (true) {
    Eigen::VectorXd lo(box.dim), hi(box.dim);
    for (int d = 0; d < box.dim; ++d) {
      const double w = (box.hi[d] - box.lo[d]) / counts[d];
      lo[d] = box.lo[d] + idx[d] * w;
      hi[d] = idx[d] + 1 == counts[d] ? box.hi[d] : lo[d] + w;
    }
    cov.cells.push_back(Cell::box(lo, hi));
    int d = 0;
    while (d < box.dim && ++idx[d] == counts[d]) idx[d++] = 0;
    if (d == box.dim) break;
  }
  return cov;
}

std::pair<int, int> verify_coverage(const Covering& covering, int probes) {
  // probe region: the truncation box, or a box around the radius parameter
  Eigen::VectorXd lo, hi;
  const int dim = covering.cells.at(0).dim;
  if (covering.truncation_box) {
    lo = covering.truncation_box->lo;
    hi = covering.truncation_box->hi;
  } else {
    const double R = std::max(covering.radius_param, 1.0) * 3.0;
    lo = Eigen::VectorXd::Constant(dim, -R);
    hi = Eigen::VectorXd::Constant(dim, R);
  }
  int cmin = std::numeric_limits<int>::max(), cmax = 0;
  for (int k = 0; k < probes; ++k) {
    Eigen::VectorXd u = halton_point(k, dim);
    Eigen::VectorXd x = lo + u.cwiseProduct(hi - lo);
    int count = 0;
    for (const Cell& cell : covering.cells)
      if (cell.contains(x)) ++count;
    cmin = std::min(cmin, count);
    cmax = std::max(cmax, count);
  }
  return {cmin, cmax};
}

GlobalBoundReport assemble_global_bound(const Covering& covering,
                                        std::vector<LocalBoundReport> per_cell,
                                        const FormBoundSpec& fb) {
  if (per_cell.size() != covering.cells.size())
    fail(ErrorKind::MissingCellReport,
         "need exactly one report per cell (" + std::to_string(covering.cells.size()) +
             " cells, " + std::to_string(per_cell.size()) + " reports)");
  double min_value = std::numeric_limits<double>::infinity();
  bool all_certified = true;
  for (const LocalBoundReport& r : per_cell) {
    if (!std::isfinite(r.value))
      fail(ErrorKind::MissingCellReport, "non-finite per-cell value");
    min_value = std::min(min_value, r.value);
    all_certified = all_certified && r.certified;
  }
  GlobalBoundReport g;
  g.covering = covering;
  g.per_cell = std::move(per_cell);
  g.discount_applied = 1.0 - fb.alpha_fb;
  g.value = g.discount_applied * min_value / covering.overlap_N;
  const bool truncation_ok =
      !covering.truncation_box || covering.neglected_mass_bound <= 1e-9;
  g.certified = all_certified && truncation_ok;
  return g;
}

GlobalBoundReport bound_for_covering(const NormalizedMeasure& measure,
                                     const CurvatureField& curvature,
                                     const Covering& covering,
                                     const BoundConfig& config) {
  // with a nonzero form bound the certified route works against rho^+ and
  // discounts by (1 - alpha); with alpha = 0 the signed methods see rho itself
  const ScalarField U =
      config.fb.alpha_fb > 0 ? curvature.rho_plus() : curvature.rho;
  std::vector<LocalBoundReport> reports;
  reports.reserve(covering.cells.size());
  for (const Cell& cell : covering.cells) {
    const PoincareEstimate p = lambda1_supply(cell, measure, config.poincare);
    reports.push_back(best_local_bound(U, cell, p, measure, config.local));
  }
  GlobalBoundReport g = assemble_global_bound(covering, std::move(reports), config.fb);
  if (covering.kind == CoveringKind::ball_lattice && !config.inf_over_lattice_ok)
    g.certified = false;  // cell means were taken over lattice centers only
  return g;
}

SweepResult radius_sweep(const NormalizedMeasure& measure,
                         const CurvatureField& curvature,
                         const std::vector<double>& radii,
                         const std::function<Covering(double)>& builder,
                         const BoundConfig& config) {
  if (radii.empty()) fail(ErrorKind::SchemaError, "radius sweep needs radii");
  SweepResult out;
  bool have_best = false;
  for (double R : radii) {
    GlobalBoundReport g = bound_for_covering(measure, curvature, builder(R), config);
    out.rows.push_back({R, g.value, g.certified});
    if (!have_best || g.value > out.best.value) {
      out.best = std::move(g);
      have_best = true;
    }
  }
  return out;
}

std::vector<double> default_sweep_radii(const NormalizedMeasure& measure) {
  double R_ref;
  if (measure.base.is_radial() && measure.base.radial().family) {
    const RadialMeasure& rm = measure.base.radial();
    R_ref = rm.family->R_a(rm.dim);
  } else {
    R_ref = std::sqrt(moment(measure, Cell::full_space(measure.base.dim()), 2.0));
  }
  std::vector<double> radii;
  for (int j = -2; j <= 2; ++j) radii.push_back(std::ldexp(R_ref, j));
  return radii;
}

} // namespace gapcert
