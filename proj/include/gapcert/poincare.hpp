#pragma once

#include <utility>

#include "gapcert/cell.hpp"
#include "gapcert/measure.hpp"

namespace gapcert {

enum class PoincareSource { bobkov_radial, bobkov_1d, user_constant, numerical_oracle };

const char* to_string(PoincareSource s);

/// A Neumann spectral-gap value lambda_1(K) for a cell, with provenance.
/// Only the closed-form routes and user constants count as certified.
struct PoincareEstimate {
  double lambda1 = 0.0;
  bool certified = false;
  PoincareSource source = PoincareSource::user_constant;
};

/// Two-sided gap bracket (n-1)/M2 <= lambda_1 <= n/M2 for a radial
/// log-concave measure conditioned on a Ball / BallComplement / full-space
/// cell, where M2 is the cell-conditioned second moment. Requires n >= 2
/// (DimensionTooSmall routes 1D callers to bobkov_1d_lower) and a
/// log-concavity certificate for the profile on the cell's radial range.
std::pair<double, double> bobkov_gap_bounds(const NormalizedMeasure& measure,
                                            const Cell& cell);

/// The certified lower end of bobkov_gap_bounds as a PoincareEstimate.
PoincareEstimate bobkov_radial_estimate(const NormalizedMeasure& measure,
                                        const Cell& cell);

/// 1D log-concave lower bound lambda_1 >= 1/(12 M2), valid on cells symmetric
/// about 0 (the measure mean must vanish; we refuse rather than recenter).
PoincareEstimate bobkov_1d_lower(const NormalizedMeasure& measure, const Cell& cell);

struct PoincarePolicy {
  enum class Kind { certified_only, allow_numerical, user };
  Kind kind = Kind::certified_only;
  double user_value = 0.0;

  static PoincarePolicy certified_only() { return {Kind::certified_only, 0.0}; }
  static PoincarePolicy allow_numerical() { return {Kind::allow_numerical, 0.0}; }
  static PoincarePolicy user(double v) { return {Kind::user, v}; }
};

/// Strategy dispatcher: certified closed forms, a numerical-oracle fallback
/// (certified = false), or a user-supplied constant.
PoincareEstimate lambda1_supply(const Cell& cell, const NormalizedMeasure& measure,
                                const PoincarePolicy& policy);

} // namespace gapcert
