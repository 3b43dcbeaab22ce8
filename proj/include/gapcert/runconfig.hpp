#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gapcert/covering.hpp"
#include "gapcert/measure.hpp"

namespace gapcert {

enum class Command { bound, oracle_radial, oracle_grid, powerlaw, sweep, validate };

const char* to_string(Command c);

struct MeasureConfig {
  std::string family = "power_law";  // power_law | custom_radial | evaluator
  double alpha = 2.0, a = 1.0, c = 1.0;
  int dim = 1;
  double eps_tail = 1e-12;
  std::string branch = "pure";     // power_law: pure | prop71 | prop72
  std::string profile = "";        // custom_radial: exponential | cosh
  std::string potential = "";      // evaluator: zero | gaussian | quartic

  MeasureSpec build() const;
  PowerLawBranch parsed_branch() const;
};

struct CoveringConfig {
  std::string kind = "two_piece";  // two_piece | ball_lattice
  std::optional<double> radius;
  std::vector<double> radii_sweep;
  bool inf_over_lattice_ok = false;
  std::vector<double> box_lo, box_hi;  // ball_lattice region
};

struct OracleConfig {
  int mesh = 2048;
  int l_max = 4;
  std::vector<double> box_lo, box_hi;  // oracle-grid region
  double h = 0.125;
};

struct LocalBoundJsonConfig {
  int k_grid_size = 16;
  std::vector<double> kappa_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::string> methods_enabled;  // empty = all
};

struct CurvatureConfig {
  std::optional<double> form_bound_alpha;  // absent -> probe-and-assume-zero
  int rho_probe_count = 256;
};

struct PoincareConfig {
  std::string policy = "certified_only";  // certified_only | allow_numerical | user
  double user_value = 0.0;
};

struct OutputConfig {
  std::string path;  // empty = stdout
  std::string format = "json";
  int precision = 12;
  bool include_timing = false;
};

struct SweepConfig {
  std::vector<int> n_values;
  std::vector<double> alpha_values;
};

struct RunConfig {
  Command command = Command::bound;
  MeasureConfig measure;
  CoveringConfig covering;
  OracleConfig oracle;
  LocalBoundJsonConfig localbound;
  CurvatureConfig curvature;
  PoincareConfig poincare;
  OutputConfig output;
  SweepConfig sweep;

  PoincarePolicy poincare_policy() const;
  LocalBoundConfig local_config() const;

  /// Parses and validates; SchemaError diagnostics carry the file name plus a
  /// line number (parse errors) or a JSON pointer (semantic errors).
  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j, const std::string& context);

  nlohmann::json echo() const;  // normalized config for embedding in records
};

} // namespace gapcert
