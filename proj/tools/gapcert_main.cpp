// gapcert: certified lower bounds for spectral gaps of weighted measures
// e^{-V} dx, validated against independent eigenvalue oracles.
//
// Usage:
//   gapcert --config run.json [--out results.json] [--format json|csv] [--quiet]

#include <CLI11.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

#include "gapcert/errors.hpp"
#include "gapcert/records.hpp"
#include "gapcert/runner.hpp"
#include "gapcert/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectral-gap certification toolkit"};
  app.set_version_flag("--version", gapcert::kToolVersion);
  std::string config_path, out_path, format_override;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_path, "output file (defaults to config output.path or stdout)");
  app.add_option("--format", format_override, "json or csv (overrides config)");
  app.add_flag("--quiet", quiet, "suppress the stdout summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    gapcert::RunConfig cfg = gapcert::RunConfig::from_file(config_path);
    if (!format_override.empty()) {
      if (format_override != "json" && format_override != "csv")
        gapcert::fail(gapcert::ErrorKind::SchemaError,
                      "--format must be json or csv");
      cfg.output.format = format_override;
    }
    if (!out_path.empty()) cfg.output.path = out_path;

    gapcert::RunResult result = gapcert::run_config(cfg);

    std::string payload;
    if (cfg.output.format == "csv") {
      if (result.csv_rows.empty())
        gapcert::fail(gapcert::ErrorKind::SchemaError,
                      "csv output is available for sweep and validate runs");
      std::ostringstream os;
      gapcert::emit_csv(os, result.csv_rows, gapcert::default_csv_columns(),
                        cfg.output.precision);
      payload = os.str();
    } else {
      payload = gapcert::dump_json(result.record, cfg.output.precision);
    }

    if (cfg.output.path.empty()) {
      std::cout << payload;
    } else {
      std::ofstream out(cfg.output.path, std::ios::binary);
      if (!out) gapcert::fail(gapcert::ErrorKind::SchemaError,
                              "cannot write to " + cfg.output.path);
      out << payload;
      if (!quiet)
        std::cout << "wrote " << cfg.output.path << " ("
                  << result.record["command"].get<std::string>() << ")\n";
    }
    return 0;
  } catch (const gapcert::Error& e) {
    std::cerr << "gapcert: " << e.what() << "\n";
    return gapcert::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "gapcert: internal error: " << e.what() << "\n";
    return 3;
  }
}
