#pragma once

#include <nlohmann/json_fwd.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "gapcert/covering.hpp"
#include "gapcert/oracle.hpp"

namespace gapcert {

/// Deterministic JSON writer: keys in insertion order, every number rendered
/// with %.{precision}g, '.' decimal separator, no locale dependence.
std::string dump_json(const nlohmann::json& j, int precision, int indent = 2);

nlohmann::json to_json(const SpectralResult& r);
nlohmann::json to_json(const PoincareEstimate& p);
nlohmann::json to_json(const LocalBoundReport& r);
nlohmann::json to_json(const GlobalBoundReport& r);

/// header + one row per record; throws ColumnMissing when a record lacks a
/// requested column.
void emit_csv(std::ostream& os, const std::vector<nlohmann::json>& records,
              const std::vector<std::string>& columns, int precision);

/// Default sweep columns: n, alpha, a, c, bound, oracle, ratio, certified.
const std::vector<std::string>& default_csv_columns();

std::string format_number(double v, int precision);

} // namespace gapcert
