#include "gapcert/runner.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "gapcert/errors.hpp"
#include "gapcert/powerlaw.hpp"
#include "gapcert/records.hpp"
#include "gapcert/version.hpp"

namespace gapcert {

using nlohmann::json;

namespace {

int worker_count(size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 2;
  if (const char* env = std::getenv("GAPCERT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::min<size_t>(n, jobs));
}

// deterministic fan-out: job i writes slot i regardless of scheduling
template <typename Job>
void run_jobs(size_t count, Job&& job) {
  const int threads = worker_count(count);
  if (threads <= 1) {
    for (size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

Cell box_from(const std::vector<double>& lo, const std::vector<double>& hi) {
  Eigen::VectorXd l(lo.size()), h(hi.size());
  for (size_t i = 0; i < lo.size(); ++i) l[static_cast<int>(i)] = lo[i];
  for (size_t i = 0; i < hi.size(); ++i) h[static_cast<int>(i)] = hi[i];
  return Cell::box(l, h);
}

FormBoundSpec form_bound_from(const RunConfig& cfg, const CurvatureField& cf,
                              double probe_radius, bool* sign_indefinite) {
  if (cfg.curvature.form_bound_alpha)
    return make_form_bound(*cfg.curvature.form_bound_alpha);
  FormBoundSpec fb;  // alpha 0, assumed_zero
  const bool nonneg =
      rho_nonneg_on_probes(cf, probe_radius, cfg.curvature.rho_probe_count);
  if (sign_indefinite) *sign_indefinite = !nonneg;
  return fb;
}

struct BoundOutcome {
  GlobalBoundReport report;
  std::vector<SweepRow> sweep_rows;
  bool rho_sign_indefinite = false;
};

BoundOutcome run_bound_pipeline(const RunConfig& cfg) {
  const MeasureSpec ms = cfg.measure.build();
  const NormalizedMeasure nm = normalize(ms, cfg.measure.eps_tail);
  const CurvatureField cf = curvature_field(ms);

  BoundOutcome out;
  BoundConfig bc;
  bc.local = cfg.local_config();
  bc.poincare = cfg.poincare_policy();
  bc.fb = form_bound_from(cfg, cf, nm.tail_radius, &out.rho_sign_indefinite);
  bc.inf_over_lattice_ok = cfg.covering.inf_over_lattice_ok;

  const int dim = ms.dim();
  std::function<Covering(double)> builder;
  if (cfg.covering.kind == "two_piece") {
    builder = [dim](double R) { return two_piece_covering(R, dim); };
  } else {
    if (cfg.covering.box_lo.size() != static_cast<size_t>(dim) ||
        cfg.covering.box_hi.size() != static_cast<size_t>(dim))
      fail(ErrorKind::SchemaError, "ball_lattice covering needs box_lo/box_hi of dim " +
                                       std::to_string(dim));
    const Cell box = box_from(cfg.covering.box_lo, cfg.covering.box_hi);
    builder = [box](double R) { return ball_lattice_covering(box, R); };
  }

  std::vector<double> radii = cfg.covering.radii_sweep;
  if (radii.empty()) {
    if (cfg.covering.radius)
      radii = {*cfg.covering.radius};
    else
      radii = {default_sweep_radii(nm)[2]};  // the reference radius
  }

  SweepResult sr = radius_sweep(nm, cf, radii, builder, bc);
  out.report = std::move(sr.best);
  out.sweep_rows = std::move(sr.rows);
  return out;
}

void enforce_certified_policy(const RunConfig& cfg, const GlobalBoundReport& r) {
  if (cfg.poincare.policy == "certified_only" && !r.certified)
    fail(ErrorKind::UncertifiedResultUnderCertifiedPolicy,
         "result is not certified under the certified_only policy");
}

json sweep_table_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const SweepRow& r : rows) {
    json row;
    row["radius"] = r.radius;
    row["value"] = r.value;
    row["certified"] = r.certified;
    arr.push_back(row);
  }
  return arr;
}

struct ValidateRow {
  double alpha, a, c;
  int n;
  GlobalBoundReport bound;
  SpectralResult oracle;
};

json validate_row_json(const ValidateRow& v) {
  json row;
  row["n"] = v.n;
  row["alpha"] = v.alpha;
  row["a"] = v.a;
  row["c"] = v.c;
  row["bound"] = v.bound.value;
  row["oracle"] = v.oracle.value;
  row["oracle_error"] = v.oracle.error_estimate;
  row["ratio"] = v.oracle.value != 0 ? v.bound.value / v.oracle.value : 0.0;
  row["certified"] = v.bound.certified;
  row["sound"] = v.bound.value <= v.oracle.value + 3.0 * v.oracle.error_estimate;
  return row;
}

ValidateRow run_validate_case(const RunConfig& cfg, double alpha, int n) {
  ValidateRow v;
  v.alpha = alpha;
  v.a = cfg.measure.a;
  v.c = cfg.measure.c;
  v.n = n;
  PowerLawSpec spec{alpha, cfg.measure.a, cfg.measure.c, n,
                    cfg.measure.parsed_branch()};
  BoundConfig bc;
  bc.local = cfg.local_config();
  bc.poincare = cfg.poincare_policy();
  v.bound = assemble_two_piece_bound(spec, bc);

  RadialOracleOptions opt;
  opt.mesh = cfg.oracle.mesh;
  opt.l_max = cfg.oracle.l_max;
  const NormalizedMeasure nm = normalize(spec.measure(), cfg.measure.eps_tail);
  v.oracle = radial_sector_gap(nm, Cell::full_space(n), opt);
  return v;
}

} // namespace

RunResult run_config(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  json& rec = out.record;
  rec["tool_version"] = kToolVersion;
  rec["command"] = to_string(cfg.command);
  rec["config"] = cfg.echo();

  switch (cfg.command) {
    case Command::powerlaw: {
      PowerLawSpec spec{cfg.measure.alpha, cfg.measure.a, cfg.measure.c,
                        cfg.measure.dim, cfg.measure.parsed_branch()};
      json res;
      res["bracket"] = spec.branch == PowerLawBranch::prop71 ? prop71_bracket(spec)
                                                             : prop72_bracket(spec);
      res["R_a"] = spec.R_a();
      res["dimension_exponent"] = 1.0 - 2.0 / spec.alpha;
      rec["results"] = res;
      rec["certified"] = false;  // bracket omits the universal constant
      break;
    }
    case Command::oracle_radial: {
      const MeasureSpec ms = cfg.measure.build();
      if (!ms.is_radial())
        fail(ErrorKind::UnsupportedGeometry, "oracle-radial needs a radial measure");
      const NormalizedMeasure nm = normalize(ms, cfg.measure.eps_tail);
      RadialOracleOptions opt;
      opt.mesh = cfg.oracle.mesh;
      opt.l_max = cfg.oracle.l_max;
      const SpectralResult r = radial_sector_gap(nm, Cell::full_space(ms.dim()), opt);
      rec["results"] = to_json(r);
      rec["certified"] = false;
      break;
    }
    case Command::oracle_grid: {
      const Cell box = box_from(cfg.oracle.box_lo, cfg.oracle.box_hi);
      PotentialEvaluator pe;
      if (cfg.measure.family == "evaluator" && !cfg.measure.potential.empty()) {
        pe = cfg.measure.build().evaluator();
      } else if (cfg.measure.family == "power_law" ||
                 cfg.measure.family == "custom_radial") {
        const MeasureSpec ms = cfg.measure.build();
        pe.dim = box.dim;
        pe.value = [ms](const Eigen::VectorXd& x) { return ms.potential(x); };
      } else {
        pe.dim = box.dim;
        pe.value = [](const Eigen::VectorXd&) { return 0.0; };
      }
      pe.dim = box.dim;
      const SpectralResult r = grid_gap(pe, box, cfg.oracle.h);
      rec["results"] = to_json(r);
      rec["certified"] = false;
      break;
    }
    case Command::bound: {
      BoundOutcome b = run_bound_pipeline(cfg);
      enforce_certified_policy(cfg, b.report);
      rec["results"] = to_json(b.report);
      if (b.sweep_rows.size() > 1)
        rec["results"]["sweep_table"] = sweep_table_json(b.sweep_rows);
      if (b.rho_sign_indefinite) rec["results"]["rho_sign_indefinite"] = true;
      rec["certified"] = b.report.certified;
      break;
    }
    case Command::validate: {
      if (cfg.measure.family != "power_law")
        fail(ErrorKind::SchemaError, "validate runs on the power_law family");
      ValidateRow v = run_validate_case(cfg, cfg.measure.alpha, cfg.measure.dim);
      enforce_certified_policy(cfg, v.bound);
      json row = validate_row_json(v);
      json res = row;
      res["bound_report"] = to_json(v.bound);
      res["oracle_report"] = to_json(v.oracle);
      rec["results"] = res;
      rec["certified"] = v.bound.certified;
      out.csv_rows = {row};
      if (!row["sound"].get<bool>())
        fail(ErrorKind::QuadratureFailure,
             "bound " + format_number(v.bound.value, 12) + " exceeds oracle " +
                 format_number(v.oracle.value, 12) + " beyond 3 sigma");
      break;
    }
    case Command::sweep: {
      if (cfg.measure.family != "power_law")
        fail(ErrorKind::SchemaError, "sweep runs on the power_law family");
      std::vector<double> alphas = cfg.sweep.alpha_values;
      if (alphas.empty()) alphas = {cfg.measure.alpha};
      std::vector<std::pair<double, int>> jobs;
      for (double a : alphas)
        for (int n : cfg.sweep.n_values) jobs.emplace_back(a, n);
      std::vector<ValidateRow> rows(jobs.size());
      run_jobs(jobs.size(), [&](size_t i) {
        rows[i] = run_validate_case(cfg, jobs[i].first, jobs[i].second);
      });
      json arr = json::array();
      bool all_certified = true;
      for (const ValidateRow& v : rows) {
        json row = validate_row_json(v);
        arr.push_back(row);
        out.csv_rows.push_back(row);
        all_certified = all_certified && v.bound.certified;
      }
      rec["results"]["rows"] = arr;
      rec["certified"] = all_certified;
      break;
    }
  }

  if (cfg.output.include_timing) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    rec["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(dt).count();
  }
  return out;
}

} // namespace gapcert
