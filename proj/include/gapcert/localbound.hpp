#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapcert/cell.hpp"
#include "gapcert/field.hpp"
#include "gapcert/measure.hpp"
#include "gapcert/poincare.hpp"

namespace gapcert {

enum class LocalBoundMethod {
  constant_floor,
  capped_ratio,
  half_min,
  shifted_k,
  signed_kappa,
};

const char* to_string(LocalBoundMethod m);

/// Per-cell lower bound on the ground energy of the Neumann realization of
/// Delta_mu + U on the cell.
struct LocalBoundReport {
  Cell cell;
  LocalBoundMethod method = LocalBoundMethod::half_min;
  std::optional<PoincareEstimate> lambda1K;
  double delta_mean = 0.0;  // the cell average entering the formula
  std::optional<double> k_used;
  std::optional<double> kappa_used;
  double value = 0.0;
  bool certified = false;
};

struct LocalBoundConfig {
  int k_grid_size = 16;
  std::vector<double> kappa_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<LocalBoundMethod> methods_enabled = {
      LocalBoundMethod::constant_floor, LocalBoundMethod::shifted_k,
      LocalBoundMethod::signed_kappa, LocalBoundMethod::half_min,
      LocalBoundMethod::capped_ratio};
  std::optional<std::vector<double>> k_grid;  // overrides the quantile default
};

/// value = inf_cell U. Exact (hence certified) only for monotone/constant
/// radial profiles on the cell's radial range; throws UncertifiedInfimum when
/// only a sampled infimum is available.
LocalBoundReport bound_constant_floor(const ScalarField& U, const Cell& cell,
                                      const NormalizedMeasure& measure);

/// value = lambda1 * mean(U) / (lambda1 + 2 sup U), for U >= 0 with finite sup.
LocalBoundReport bound_capped_ratio(const ScalarField& U, const Cell& cell,
                                    const PoincareEstimate& p,
                                    const NormalizedMeasure& measure);

/// value = 1/2 * mean(min(lambda1/2, U)), for U >= 0.
LocalBoundReport bound_half_min(const ScalarField& U, const Cell& cell,
                                const PoincareEstimate& p,
                                const NormalizedMeasure& measure);

/// value = max over feasible k >= 0 (U - k >= 0 on the cell) of
/// k + 1/2 * mean(min(lambda1/2, U - k)).
LocalBoundReport bound_shifted_k(const ScalarField& U, const Cell& cell,
                                 const PoincareEstimate& p,
                                 const NormalizedMeasure& measure,
                                 const std::vector<double>& k_grid);

/// Sign-indefinite variant: for candidates (kappa, k) with
/// sup (U-k)^- <= (1-kappa) lambda1/2,
/// value = max of k + 1/2 * mean(min(lambda1/2,(U-k)^+) - (U-k)^-/kappa).
/// May be negative.
LocalBoundReport bound_signed_kappa(const ScalarField& U, const Cell& cell,
                                    const PoincareEstimate& p,
                                    const NormalizedMeasure& measure,
                                    const std::vector<double>& kappa_grid,
                                    const std::vector<double>& k_grid);

/// Runs every enabled method whose preconditions hold and returns the report
/// with the largest value. Ties resolve in the order constant_floor,
/// shifted_k, signed_kappa, half_min, capped_ratio.
LocalBoundReport best_local_bound(const ScalarField& U, const Cell& cell,
                                  const PoincareEstimate& p,
                                  const NormalizedMeasure& measure,
                                  const LocalBoundConfig& config = {});

/// Default k candidates: value quantiles {0, 1/16, ..., 15/16} of U over the
/// cell, clamped to feasibility, with 0 always present.
std::vector<double> default_k_grid(const ScalarField& U, const Cell& cell,
                                   const NormalizedMeasure& measure, int size);

/// a b / (a + b); satisfies min(a,b)/2 <= ab/(a+b) <= min(a,b) for a, b > 0.
double harmonic_product(double a, double b);

} // namespace gapcert
