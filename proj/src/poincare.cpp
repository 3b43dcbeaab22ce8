#include "gapcert/poincare.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "gapcert/errors.hpp"
#include "gapcert/oracle.hpp"

namespace gapcert {

const char* to_string(PoincareSource s) {
  switch (s) {
    case PoincareSource::bobkov_radial: return "bobkov_radial";
    case PoincareSource::bobkov_1d: return "bobkov_1d";
    case PoincareSource::user_constant: return "user_constant";
    case PoincareSource::numerical_oracle: return "numerical_oracle";
  }
  return "?";
}

namespace {

bool radial_bracket_cell(const Cell& cell) {
  return cell.shape == Cell::Shape::Ball || cell.shape == Cell::Shape::BallComplement;
}

// Log-concavity certificate on the cell's radial range: W convex and
// nondecreasing. Closed form for power-law profiles with alpha >= 1,
// sampled (512 radii) otherwise.
void require_log_concave(const NormalizedMeasure& m, double r_lo, double r_hi) {
  const RadialMeasure& rm = m.base.radial();
  if (rm.family) {
    if (rm.family->alpha >= 1.0) return;
    fail(ErrorKind::NotLogConcave, "power-law profile needs alpha >= 1");
  }
  const double hi = std::isinf(r_hi) ? 4.0 * m.tail_radius : r_hi;
  for (int i = 0; i <= 512; ++i) {
    const double r = std::max(r_lo + (hi - r_lo) * i / 512.0, 1e-10);
    if (rm.profile_deriv(r) < -1e-10 || rm.deriv2_at(r) < -1e-10)
      fail(ErrorKind::NotLogConcave,
           "sampled profile certificate failed at r=" + std::to_string(r));
  }
}

} // namespace

std::pair<double, double> bobkov_gap_bounds(const NormalizedMeasure& measure,
                                            const Cell& cell) {
  if (!measure.base.is_radial())
    fail(ErrorKind::UnsupportedGeometry, "gap bracket needs a radial measure");
  const int n = measure.base.dim();
  if (n < 2)
    fail(ErrorKind::DimensionTooSmall, "n = 1 routes to the one-dimensional bound");
  if (!cell.is_full_space() && !radial_bracket_cell(cell))
    fail(ErrorKind::UnsupportedGeometry,
         "gap bracket applies to balls, ball complements and the full space");
  auto [r_lo, r_hi] = cell.radial_range();
  require_log_concave(measure, r_lo, r_hi);
  const double M2 = moment(measure, cell, 2.0);
  return {(n - 1) / M2, n / M2};
}

PoincareEstimate bobkov_radial_estimate(const NormalizedMeasure& measure,
                                        const Cell& cell) {
  auto [lower, upper] = bobkov_gap_bounds(measure, cell);
  (void)upper;
  return PoincareEstimate{lower, true, PoincareSource::bobkov_radial};
}

PoincareEstimate bobkov_1d_lower(const NormalizedMeasure& measure, const Cell& cell) {
  if (!measure.base.is_radial())
    fail(ErrorKind::UnsupportedGeometry, "1D bound needs an even measure e^{-W(|x|)}");
  if (measure.base.dim() != 1)
    fail(ErrorKind::UnsupportedGeometry, "bobkov_1d_lower is for n = 1");
  // symmetric cells about 0 only; we refuse rather than recenter
  if (!cell.is_full_space()) {
    const bool symmetric_interval =
        (cell.shape == Cell::Shape::Ball && cell.origin_centered()) ||
        (cell.shape == Cell::Shape::Box && cell.lo[0] == -cell.hi[0]);
    if (!symmetric_interval)
      fail(ErrorKind::NotCentered, "1D bound requires a cell symmetric about 0");
  }
  auto [r_lo, r_hi] = cell.is_full_space()
                          ? std::pair<double, double>{0.0, std::numeric_limits<double>::infinity()}
                          : cell.radial_range();
  require_log_concave(measure, r_lo, r_hi);
  const double M2 = moment(measure, cell, 2.0);
  return PoincareEstimate{1.0 / (12.0 * M2), true, PoincareSource::bobkov_1d};
}

PoincareEstimate lambda1_supply(const Cell& cell, const NormalizedMeasure& measure,
                                const PoincarePolicy& policy) {
  switch (policy.kind) {
    case PoincarePolicy::Kind::user:
      if (!(policy.user_value > 0))
        fail(ErrorKind::SchemaError, "user Poincare constant must be positive");
      return PoincareEstimate{policy.user_value, true, PoincareSource::user_constant};
    case PoincarePolicy::Kind::certified_only: {
      if (!measure.base.is_radial())
        fail(ErrorKind::NoCertifiedEstimate,
             "no certified Poincare route for non-radial measures");
      if (measure.base.dim() == 1) return bobkov_1d_lower(measure, cell);
      return bobkov_radial_estimate(measure, cell);
    }
    case PoincarePolicy::Kind::allow_numerical: {
      if (measure.base.is_radial() &&
          (cell.origin_centered() || measure.base.dim() == 1)) {
        RadialOracleOptions opt;
        opt.mesh = 1024;
        opt.l_max = 2;
        SpectralResult r = radial_sector_gap(measure, cell, opt);
        return PoincareEstimate{r.value, false, PoincareSource::numerical_oracle};
      }
      if (cell.shape == Cell::Shape::Box && cell.dim <= 2) {
        PotentialEvaluator pe;
        if (measure.base.is_radial()) {
          pe.dim = measure.base.dim();
          auto W = measure.base.radial().profile;
          pe.value = [W](const Eigen::VectorXd& x) { return W(x.norm()); };
        } else {
          pe = measure.base.evaluator();
        }
        const double h = (cell.hi[0] - cell.lo[0]) / 64.0;
        SpectralResult r = grid_gap(pe, cell, h);
        return PoincareEstimate{r.value, false, PoincareSource::numerical_oracle};
      }
      fail(ErrorKind::UnsupportedGeometry,
           "no numerical gap route for " + cell.describe());
    }
  }
  fail(ErrorKind::SchemaError, "unknown Poincare policy");
}

} // namespace gapcert
