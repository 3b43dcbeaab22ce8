#pragma once

#include <Eigen/Core>
#include <optional>

#include "gapcert/cell.hpp"
#include "gapcert/field.hpp"
#include "gapcert/measure.hpp"

namespace gapcert {

enum class OracleMethod { radial_sector, grid_fd };

/// Numerical eigenvalue with an a-posteriori error estimate. `value` is the
/// finest-mesh result; `error_estimate` combines the Richardson mesh
/// difference with the tail-truncation stabilization difference.
struct SpectralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  OracleMethod method = OracleMethod::radial_sector;
  int mesh_size = 0;
  std::optional<int> sector_l;
};

struct RadialOracleOptions {
  int mesh = 2048;
  int l_max = 4;
  /// Tail truncation is doubled until the eigenvalue moves by less than this
  /// relative amount (or the weight leaves the representable range).
  double tail_rel_tol = 2e-4;
};

/// Spectral gap of the weighted Laplacian on a radial cell (or the full
/// space), by spherical-harmonic sector reduction to weighted
/// Sturm-Liouville problems with weight r^(n-1) e^(-W(r)). Neumann conditions
/// at finite radial boundaries; natural conditions where the weight
/// degenerates (r = 0) or decays (truncated tail). In 1D the interval problem
/// is solved directly, without sector reduction.
SpectralResult radial_sector_gap(const NormalizedMeasure& measure, const Cell& cell,
                                 const RadialOracleOptions& opt = {});

/// Ground energy (no constant deflation) of the Neumann realization of
/// Delta_mu + U on a radial cell or 1D interval.
SpectralResult schrodinger_ground_energy(const NormalizedMeasure& measure,
                                         const Cell& cell, const ScalarField& U,
                                         int mesh = 1024);

/// Spectral gap of Delta_mu on a Box cell in dim <= 2 by a finite-volume
/// discretization: stiffness from edge-midpoint weights e^(-V) h^(n-2), mass
/// from node control-volume weights. Node weights underflowing double range
/// are clamped at 1e-300 (SingularMass warning on stderr).
SpectralResult grid_gap(const PotentialEvaluator& pe, const Cell& box, double h);

/// Discrete Rayleigh quotient Integral|grad u|^2 dmu / Integral (u-mean)^2 dmu
/// for a grid function u on the same discretization as grid_gap.
double rayleigh_quotient(const Eigen::VectorXd& u, const PotentialEvaluator& pe,
                         const Cell& box, double h);

/// Number of grid nodes grid_gap uses for a given box and spacing (so callers
/// can build trial functions).
int grid_node_count(const Cell& box, double h);

} // namespace gapcert
