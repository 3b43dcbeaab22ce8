#include "gapcert/records.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

using nlohmann::json;

std::string format_number(double v, int precision) {
  char buf[64];
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

namespace {

void write_json(std::ostream& os, const json& j, int precision, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        os << pad_in << json(it.key()).dump() << ": ";
        write_json(os, it.value(), precision, indent, depth + 1);
        if (k + 1 < j.size()) os << ",";
        os << "\n";
      }
      os << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        os << pad_in;
        write_json(os, j[i], precision, indent, depth + 1);
        if (i + 1 < j.size()) os << ",";
        os << "\n";
      }
      os << pad << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_number(j.get<double>(), precision);
      return;
    default:
      os << j.dump();
      return;
  }
}

} // namespace

std::string dump_json(const json& j, int precision, int indent) {
  std::ostringstream os;
  write_json(os, j, precision, indent, 0);
  os << "\n";
  return os.str();
}

json to_json(const SpectralResult& r) {
  json j;
  j["value"] = r.value;
  j["error_estimate"] = r.error_estimate;
  j["method"] = r.method == OracleMethod::radial_sector ? "radial_sector" : "grid_fd";
  j["mesh_size"] = r.mesh_size;
  if (r.sector_l) j["sector_l"] = *r.sector_l;
  return j;
}

json to_json(const PoincareEstimate& p) {
  json j;
  j["lambda1"] = p.lambda1;
  j["certified"] = p.certified;
  j["source"] = to_string(p.source);
  return j;
}

json to_json(const LocalBoundReport& r) {
  json j;
  j["cell"] = r.cell.describe();
  j["method"] = to_string(r.method);
  j["value"] = r.value;
  j["certified"] = r.certified;
  j["delta_mean"] = r.delta_mean;
  if (r.lambda1K) j["lambda1K"] = to_json(*r.lambda1K);
  if (r.k_used) j["k_used"] = *r.k_used;
  if (r.kappa_used) j["kappa_used"] = *r.kappa_used;
  return j;
}

json to_json(const GlobalBoundReport& r) {
  json j;
  j["value"] = r.value;
  j["certified"] = r.certified;
  j["discount_applied"] = r.discount_applied;
  j["overlap_N"] = r.covering.overlap_N;
  j["covering_kind"] = to_string(r.covering.kind);
  j["radius"] = r.covering.radius_param;
  json cells = json::array();
  for (const LocalBoundReport& c : r.per_cell) cells.push_back(to_json(c));
  j["per_cell"] = cells;
  return j;
}

void emit_csv(std::ostream& os, const std::vector<json>& records,
              const std::vector<std::string>& columns, int precision) {
  for (size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  for (const json& rec : records) {
    for (size_t i = 0; i < columns.size(); ++i) {
      if (!rec.contains(columns[i]))
        fail(ErrorKind::ColumnMissing, "record lacks column '" + columns[i] + "'");
      const json& v = rec.at(columns[i]);
      if (v.is_number_float())
        os << format_number(v.get<double>(), precision);
      else if (v.is_boolean())
        os << (v.get<bool>() ? "true" : "false");
      else if (v.is_string())
        os << v.get<std::string>();
      else
        os << v.dump();
      os << (i + 1 < columns.size() ? "," : "\n");
    }
  }
}

const std::vector<std::string>& default_csv_columns() {
  static const std::vector<std::string> cols = {"n",     "alpha",  "a",     "c",
                                                "bound", "oracle", "ratio", "certified"};
  return cols;
}

} // namespace gapcert
