#include "gapcert/runconfig.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

using nlohmann::json;

const char* to_string(Command c) {
  switch (c) {
    case Command::bound: return "bound";
    case Command::oracle_radial: return "oracle-radial";
    case Command::oracle_grid: return "oracle-grid";
    case Command::powerlaw: return "powerlaw";
    case Command::sweep: return "sweep";
    case Command::validate: return "validate";
  }
  return "?";
}

namespace {

[[noreturn]] void schema_fail(const std::string& context, const std::string& pointer,
                              const std::string& msg) {
  fail(ErrorKind::SchemaError, context + ": " + pointer + ": " + msg);
}

struct Reader {
  const json& j;
  std::string context;
  std::string pointer;

  Reader at(const std::string& key) const {
    return Reader{j.at(key), context, pointer + "/" + key};
  }
  bool has(const std::string& key) const { return j.contains(key); }

  void require_object() const {
    if (!j.is_object()) schema_fail(context, pointer, "expected an object");
  }
  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number())
      schema_fail(context, pointer + "/" + key, "expected a number");
    return v.get<double>();
  }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer())
      schema_fail(context, pointer + "/" + key, "expected an integer");
    return v.get<int>();
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean())
      schema_fail(context, pointer + "/" + key, "expected a boolean");
    return v.get<bool>();
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string())
      schema_fail(context, pointer + "/" + key, "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> number_list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = j.at(key);
    if (!v.is_array())
      schema_fail(context, pointer + "/" + key, "expected an array of numbers");
    for (const auto& e : v) {
      if (!e.is_number())
        schema_fail(context, pointer + "/" + key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<int> int_list(const std::string& key) const {
    std::vector<int> out;
    if (!has(key)) return out;
    const json& v = j.at(key);
    if (!v.is_array())
      schema_fail(context, pointer + "/" + key, "expected an array of integers");
    for (const auto& e : v) {
      if (!e.is_number_integer())
        schema_fail(context, pointer + "/" + key, "expected an array of integers");
      out.push_back(e.get<int>());
    }
    return out;
  }
  std::vector<std::string> string_list(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const json& v = j.at(key);
    if (!v.is_array())
      schema_fail(context, pointer + "/" + key, "expected an array of strings");
    for (const auto& e : v) {
      if (!e.is_string())
        schema_fail(context, pointer + "/" + key, "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }
  void one_of(const std::string& key, const std::string& value,
              std::initializer_list<const char*> allowed) const {
    for (const char* a : allowed)
      if (value == a) return;
    std::ostringstream os;
    os << "'" << value << "' is not one of {";
    bool first = true;
    for (const char* a : allowed) {
      os << (first ? "" : ", ") << a;
      first = false;
    }
    os << "}";
    schema_fail(context, pointer + "/" + key, os.str());
  }
};

int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

} // namespace

PowerLawBranch MeasureConfig::parsed_branch() const {
  if (branch == "pure") return PowerLawBranch::pure;
  if (branch == "prop71") return PowerLawBranch::prop71;
  if (branch == "prop72") return PowerLawBranch::prop72;
  fail(ErrorKind::SchemaError, "unknown branch '" + branch + "'");
}

MeasureSpec MeasureConfig::build() const {
  if (family == "power_law")
    return MeasureSpec::power_law(alpha, a, c, dim, parsed_branch());
  if (family == "custom_radial") {
    if (profile == "exponential")
      return MeasureSpec::custom_radial(
          dim, [](double r) { return r; }, [](double) { return 1.0; },
          [](double) { return 0.0; });
    if (profile == "cosh")
      return MeasureSpec::custom_radial(
          dim, [](double r) { return std::cosh(r) - 1.0; },
          [](double r) { return std::sinh(r); }, [](double r) { return std::cosh(r); });
    fail(ErrorKind::SchemaError, "unknown custom_radial profile '" + profile + "'");
  }
  if (family == "evaluator") {
    PotentialEvaluator pe;
    pe.dim = dim;
    if (potential == "zero") {
      pe.value = [](const Eigen::VectorXd&) { return 0.0; };
      pe.gradient = [](const Eigen::VectorXd& x) {
        return Eigen::VectorXd::Zero(x.size()).eval();
      };
      pe.hessian = [](const Eigen::VectorXd& x) {
        return Eigen::MatrixXd::Zero(x.size(), x.size()).eval();
      };
    } else if (potential == "gaussian") {
      pe.value = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
      pe.gradient = [](const Eigen::VectorXd& x) { return x.eval(); };
      pe.hessian = [](const Eigen::VectorXd& x) {
        return Eigen::MatrixXd::Identity(x.size(), x.size()).eval();
      };
    } else if (potential == "quartic") {
      pe.value = [](const Eigen::VectorXd& x) {
        return 0.25 * std::pow(x.norm(), 4.0);
      };
    } else {
      fail(ErrorKind::SchemaError, "unknown evaluator potential '" + potential + "'");
    }
    return MeasureSpec::from_evaluator(pe);
  }
  fail(ErrorKind::SchemaError, "unknown measure family '" + family + "'");
}

PoincarePolicy RunConfig::poincare_policy() const {
  if (poincare.policy == "certified_only") return PoincarePolicy::certified_only();
  if (poincare.policy == "allow_numerical") return PoincarePolicy::allow_numerical();
  if (poincare.policy == "user") return PoincarePolicy::user(poincare.user_value);
  fail(ErrorKind::SchemaError, "unknown poincare policy '" + poincare.policy + "'");
}

LocalBoundConfig RunConfig::local_config() const {
  LocalBoundConfig lc;
  lc.k_grid_size = localbound.k_grid_size;
  lc.kappa_grid = localbound.kappa_grid;
  if (!localbound.methods_enabled.empty()) {
    lc.methods_enabled.clear();
    for (const std::string& name : localbound.methods_enabled) {
      if (name == "constant_floor")
        lc.methods_enabled.push_back(LocalBoundMethod::constant_floor);
      else if (name == "capped_ratio")
        lc.methods_enabled.push_back(LocalBoundMethod::capped_ratio);
      else if (name == "half_min")
        lc.methods_enabled.push_back(LocalBoundMethod::half_min);
      else if (name == "shifted_k")
        lc.methods_enabled.push_back(LocalBoundMethod::shifted_k);
      else if (name == "signed_kappa")
        lc.methods_enabled.push_back(LocalBoundMethod::signed_kappa);
      else
        fail(ErrorKind::SchemaError, "unknown local bound method '" + name + "'");
    }
  }
  return lc;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::SchemaError, path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::SchemaError, path + ":" + std::to_string(line_of_offset(text, e.byte)) +
                                     ": " + e.what());
  }
  return from_json(j, path);
}

RunConfig RunConfig::from_json(const json& j, const std::string& context) {
  Reader root{j, context, ""};
  root.require_object();
  if (!root.has("command")) schema_fail(context, "/command", "missing required key");

  RunConfig cfg;
  const std::string cmd = root.str("command", "");
  root.one_of("command", cmd,
              {"bound", "oracle-radial", "oracle-grid", "powerlaw", "sweep", "validate"});
  if (cmd == "bound") cfg.command = Command::bound;
  else if (cmd == "oracle-radial") cfg.command = Command::oracle_radial;
  else if (cmd == "oracle-grid") cfg.command = Command::oracle_grid;
  else if (cmd == "powerlaw") cfg.command = Command::powerlaw;
  else if (cmd == "sweep") cfg.command = Command::sweep;
  else cfg.command = Command::validate;

  if (root.has("measure")) {
    Reader m = root.at("measure");
    m.require_object();
    cfg.measure.family = m.str("family", cfg.measure.family);
    m.one_of("family", cfg.measure.family, {"power_law", "custom_radial", "evaluator"});
    cfg.measure.alpha = m.number("alpha", cfg.measure.alpha);
    cfg.measure.a = m.number("a", cfg.measure.a);
    cfg.measure.c = m.number("c", cfg.measure.c);
    cfg.measure.dim = m.integer("dim", cfg.measure.dim);
    cfg.measure.eps_tail = m.number("eps_tail", cfg.measure.eps_tail);
    cfg.measure.branch = m.str("branch", cfg.measure.branch);
    m.one_of("branch", cfg.measure.branch, {"pure", "prop71", "prop72"});
    cfg.measure.profile = m.str("profile", cfg.measure.profile);
    cfg.measure.potential = m.str("potential", cfg.measure.potential);
    if (cfg.measure.dim < 1)
      schema_fail(context, "/measure/dim", "dimension must be >= 1");
    if (!(cfg.measure.eps_tail > 0 && cfg.measure.eps_tail <= 1e-6))
      schema_fail(context, "/measure/eps_tail", "must lie in (0, 1e-6]");
    if (cfg.measure.family == "power_law" && !(cfg.measure.alpha >= 1))
      schema_fail(context, "/measure/alpha", "must be >= 1");
    if (cfg.measure.family == "power_law" && !(cfg.measure.a > 0))
      schema_fail(context, "/measure/a", "must be positive");
    if (cfg.measure.family == "power_law" &&
        !(cfg.measure.c > 0 && cfg.measure.c <= 1))
      schema_fail(context, "/measure/c", "must lie in (0, 1]");
  } else if (cfg.command != Command::oracle_grid) {
    schema_fail(context, "/measure", "missing required block");
  }

  if (root.has("covering")) {
    Reader c = root.at("covering");
    c.require_object();
    cfg.covering.kind = c.str("kind", cfg.covering.kind);
    c.one_of("kind", cfg.covering.kind, {"two_piece", "ball_lattice"});
    if (c.has("radius")) cfg.covering.radius = c.number("radius", 0.0);
    if (cfg.covering.radius && !(*cfg.covering.radius > 0))
      schema_fail(context, "/covering/radius", "must be positive");
    cfg.covering.radii_sweep = c.number_list("radii_sweep");
    for (double r : cfg.covering.radii_sweep)
      if (!(r > 0)) schema_fail(context, "/covering/radii_sweep", "radii must be positive");
    cfg.covering.inf_over_lattice_ok = c.boolean("inf_over_lattice_ok", false);
    cfg.covering.box_lo = c.number_list("box_lo");
    cfg.covering.box_hi = c.number_list("box_hi");
  }

  if (root.has("oracle")) {
    Reader o = root.at("oracle");
    o.require_object();
    cfg.oracle.mesh = o.integer("mesh", cfg.oracle.mesh);
    if (cfg.oracle.mesh < 256)
      schema_fail(context, "/oracle/mesh", "mesh must be >= 256");
    cfg.oracle.l_max = o.integer("l_max", cfg.oracle.l_max);
    if (cfg.oracle.l_max < 1)
      schema_fail(context, "/oracle/l_max", "l_max must be >= 1");
    cfg.oracle.box_lo = o.number_list("box_lo");
    cfg.oracle.box_hi = o.number_list("box_hi");
    cfg.oracle.h = o.number("h", cfg.oracle.h);
    if (!(cfg.oracle.h > 0)) schema_fail(context, "/oracle/h", "h must be positive");
  }

  if (root.has("localbound")) {
    Reader l = root.at("localbound");
    l.require_object();
    cfg.localbound.k_grid_size = l.integer("k_grid_size", cfg.localbound.k_grid_size);
    if (cfg.localbound.k_grid_size < 1)
      schema_fail(context, "/localbound/k_grid_size", "must be >= 1");
    if (l.has("kappa_grid")) {
      cfg.localbound.kappa_grid = l.number_list("kappa_grid");
      for (double k : cfg.localbound.kappa_grid)
        if (!(k > 0 && k < 1))
          schema_fail(context, "/localbound/kappa_grid", "kappa must lie in (0,1)");
    }
    cfg.localbound.methods_enabled = l.string_list("methods_enabled");
  }

  if (root.has("curvature")) {
    Reader c = root.at("curvature");
    c.require_object();
    if (c.has("form_bound_alpha")) {
      cfg.curvature.form_bound_alpha = c.number("form_bound_alpha", 0.0);
      if (!(*cfg.curvature.form_bound_alpha >= 0 && *cfg.curvature.form_bound_alpha < 1))
        schema_fail(context, "/curvature/form_bound_alpha", "must lie in [0, 1)");
    }
    cfg.curvature.rho_probe_count = c.integer("rho_probe_count", 256);
  }

  if (root.has("poincare")) {
    Reader p = root.at("poincare");
    p.require_object();
    cfg.poincare.policy = p.str("policy", cfg.poincare.policy);
    p.one_of("policy", cfg.poincare.policy,
             {"certified_only", "allow_numerical", "user"});
    cfg.poincare.user_value = p.number("user_value", 0.0);
    if (cfg.poincare.policy == "user" && !(cfg.poincare.user_value > 0))
      schema_fail(context, "/poincare/user_value", "must be positive");
  }

  if (root.has("output")) {
    Reader o = root.at("output");
    o.require_object();
    cfg.output.path = o.str("path", "");
    cfg.output.format = o.str("format", cfg.output.format);
    o.one_of("format", cfg.output.format, {"json", "csv"});
    cfg.output.precision = o.integer("precision", cfg.output.precision);
    if (cfg.output.precision < 6 || cfg.output.precision > 17)
      schema_fail(context, "/output/precision", "precision must lie in [6, 17]");
    cfg.output.include_timing = o.boolean("include_timing", false);
  }

  if (root.has("sweep")) {
    Reader s = root.at("sweep");
    s.require_object();
    cfg.sweep.n_values = s.int_list("n");
    for (int n : cfg.sweep.n_values)
      if (n < 1) schema_fail(context, "/sweep/n", "dimensions must be >= 1");
    cfg.sweep.alpha_values = s.number_list("alpha");
    for (double a : cfg.sweep.alpha_values)
      if (!(a >= 1)) schema_fail(context, "/sweep/alpha", "alpha must be >= 1");
  }

  // command-specific requirements
  if (cfg.command == Command::oracle_grid) {
    if (cfg.oracle.box_lo.size() != cfg.oracle.box_hi.size() ||
        cfg.oracle.box_lo.empty() || cfg.oracle.box_lo.size() > 2)
      schema_fail(context, "/oracle/box_lo", "oracle-grid needs box_lo/box_hi, dim <= 2");
    for (size_t i = 0; i < cfg.oracle.box_lo.size(); ++i)
      if (!(cfg.oracle.box_lo[i] < cfg.oracle.box_hi[i]))
        schema_fail(context, "/oracle/box_lo", "box_lo must be < box_hi componentwise");
  }
  if (cfg.command == Command::powerlaw) {
    if (cfg.measure.family != "power_law")
      schema_fail(context, "/measure/family", "powerlaw command needs a power_law measure");
    if (cfg.measure.branch == "pure")
      schema_fail(context, "/measure/branch",
                  "bracket evaluation needs branch prop71 or prop72");
  }
  if (cfg.command == Command::sweep && cfg.sweep.n_values.empty())
    schema_fail(context, "/sweep/n", "sweep needs a list of dimensions");

  return cfg;
}

json RunConfig::echo() const {
  json j;
  j["command"] = to_string(command);
  json m;
  m["family"] = measure.family;
  m["alpha"] = measure.alpha;
  m["a"] = measure.a;
  m["c"] = measure.c;
  m["dim"] = measure.dim;
  m["eps_tail"] = measure.eps_tail;
  if (measure.family == "power_law") m["branch"] = measure.branch;
  if (!measure.profile.empty()) m["profile"] = measure.profile;
  if (!measure.potential.empty()) m["potential"] = measure.potential;
  j["measure"] = m;
  json c;
  c["kind"] = covering.kind;
  if (covering.radius) c["radius"] = *covering.radius;
  if (!covering.radii_sweep.empty()) c["radii_sweep"] = covering.radii_sweep;
  c["inf_over_lattice_ok"] = covering.inf_over_lattice_ok;
  j["covering"] = c;
  json o;
  o["mesh"] = oracle.mesh;
  o["l_max"] = oracle.l_max;
  if (!oracle.box_lo.empty()) {
    o["box_lo"] = oracle.box_lo;
    o["box_hi"] = oracle.box_hi;
    o["h"] = oracle.h;
  }
  j["oracle"] = o;
  json p;
  p["policy"] = poincare.policy;
  if (poincare.policy == "user") p["user_value"] = poincare.user_value;
  j["poincare"] = p;
  if (curvature.form_bound_alpha) j["curvature"]["form_bound_alpha"] = *curvature.form_bound_alpha;
  j["output"]["format"] = output.format;
  j["output"]["precision"] = output.precision;
  if (!sweep.n_values.empty()) {
    j["sweep"]["n"] = sweep.n_values;
    if (!sweep.alpha_values.empty()) j["sweep"]["alpha"] = sweep.alpha_values;
  }
  return j;
}

} // namespace gapcert
