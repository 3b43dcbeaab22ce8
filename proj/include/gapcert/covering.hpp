#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gapcert/cell.hpp"
#include "gapcert/curvature.hpp"
#include "gapcert/localbound.hpp"
#include "gapcert/measure.hpp"
#include "gapcert/poincare.hpp"

namespace gapcert {

enum class CoveringKind { two_piece, ball_lattice, box_partition };

const char* to_string(CoveringKind k);

struct Covering {
  std::vector<Cell> cells;
  int overlap_N = 1;
  CoveringKind kind = CoveringKind::two_piece;
  double radius_param = 0.0;
  std::optional<Cell> truncation_box;   // region the covering is known to cover
  double neglected_mass_bound = 0.0;    // mu-mass possibly outside it
};

/// [Ball(0,R), BallComplement(R)] with overlap 1; covers all of R^n.
Covering two_piece_covering(double R, int dim);

/// Balls of radius R centered on a cubic lattice covering the box; the pitch
/// 2R/sqrt(n)*(1-1e-9) makes the cell circumradius just under R. overlap_N is
/// the exact count of lattice centers within distance R of a lattice-cell
/// corner (the deepest point). dim <= 2. A caller-supplied pitch above the
/// coverage-critical value throws PitchTooCoarse.
Covering ball_lattice_covering(const Cell& box, double R,
                               std::optional<double> pitch = std::nullopt);

/// Disjoint partition of a box into counts[d] slabs per axis (overlap 1).
Covering box_partition_covering(const Cell& box, const std::vector<int>& counts);

/// Coverage check by quasi-random sampling over the covering's region:
/// returns (min, max) cover multiplicity over the probes.
std::pair<int, int> verify_coverage(const Covering& covering, int probes = 10000);

struct GlobalBoundReport {
  Covering covering;
  std::vector<LocalBoundReport> per_cell;
  double value = 0.0;
  bool certified = false;
  double discount_applied = 1.0;  // the (1 - alpha_fb) factor
};

/// value = (1-alpha_fb) * (1/overlap_N) * min_i per_cell[i].value. Certified
/// only when every per-cell report is certified and the covering either
/// covers everything or its neglected mass bound is within the measure's
/// eps_tail budget.
GlobalBoundReport assemble_global_bound(const Covering& covering,
                                        std::vector<LocalBoundReport> per_cell,
                                        const FormBoundSpec& fb);

struct BoundConfig {
  LocalBoundConfig local;
  PoincarePolicy poincare = PoincarePolicy::certified_only();
  FormBoundSpec fb;
  bool inf_over_lattice_ok = false;
};

/// Full per-covering pipeline: U = rho (or rho^+ under a positive form-bound
/// alpha), lambda_1(K) from the Poincare policy, best_local_bound per cell,
/// then assembly.
GlobalBoundReport bound_for_covering(const NormalizedMeasure& measure,
                                     const CurvatureField& curvature,
                                     const Covering& covering,
                                     const BoundConfig& config);

struct SweepRow {
  double radius = 0.0;
  double value = 0.0;
  bool certified = false;
};

struct SweepResult {
  GlobalBoundReport best;
  std::vector<SweepRow> rows;
};

/// Runs the pipeline for each radius and keeps the best report; the sweep
/// table is preserved for output.
SweepResult radius_sweep(const NormalizedMeasure& measure,
                         const CurvatureField& curvature,
                         const std::vector<double>& radii,
                         const std::function<Covering(double)>& builder,
                         const BoundConfig& config);

/// Default sweep radii 2^j * R_ref, j = -2..2, with R_ref = (a n)^(1/alpha)
/// for power laws and sqrt(M2) otherwise.
std::vector<double> default_sweep_radii(const NormalizedMeasure& measure);

} // namespace gapcert
