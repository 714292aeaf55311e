// spadaac command-line front end: single-point optimization, parameter
// sweeps, Monte Carlo validation, and concavity contour scans, all driven by
// a JSON config with flag overrides.
//
// Exit codes: 0 success, 1 config/I-O error, 2 numerical non-convergence,
// 3 validation failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spadaac/experiment.hpp"
#include "spadaac/format.hpp"
#include "spadaac/version.hpp"

namespace fs = std::filesystem;
using spadaac::ExperimentConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitValidation = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> algorithm;
  std::optional<int> threads;
};

ExperimentConfig load_config(const Overrides& ov) {
  ExperimentConfig cfg;
  if (!ov.config_path.empty()) {
    cfg = spadaac::config_from_file(ov.config_path);
  }
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.seed) cfg.plan.seed = *ov.seed;
  if (ov.trials) cfg.plan.trials = *ov.trials;
  if (ov.algorithm) cfg.algorithms = {spadaac::algorithm_from_string(*ov.algorithm)};
  if (ov.threads) {
    cfg.threads = *ov.threads;
    cfg.plan.threads = *ov.threads;
  }
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw spadaac::ConfigError("cannot write output file: " + path.string());
  out << contents;
  if (!out) throw spadaac::ConfigError("write failed: " + path.string());
}

void write_metadata(const ExperimentConfig& cfg, const std::string& subcommand) {
  write_file(fs::path(cfg.out_dir) / "run_meta.json",
             spadaac::run_metadata(cfg, subcommand).dump(2) + "\n");
}

int cmd_optimize(const Overrides& ov) {
  const ExperimentConfig cfg = load_config(ov);
  const nlohmann::json result = spadaac::run_point(cfg);
  write_file(fs::path(cfg.out_dir) / "point.json", result.dump(2) + "\n");
  bool converged = true;
  for (const auto& [name, sol] : result.at("point").at("solutions").items()) {
    std::cout << name << ": alpha_opt=" << sol.at("alpha_opt").dump()
              << " rate_bits=" << sol.at("rate_bits").dump()
              << " avg_trigger=" << sol.at("avg_trigger").dump() << "\n";
    if (!sol.at("converged").get<bool>()) converged = false;
  }
  return converged ? kExitOk : kExitNonConvergence;
}

int cmd_sweep(const Overrides& ov) {
  const ExperimentConfig cfg = load_config(ov);
  const spadaac::SweepResult result = spadaac::run_sweep(cfg);
  std::ostringstream csv;
  spadaac::write_sweep_csv(csv, result.rows);
  write_file(fs::path(cfg.out_dir) / "sweep.csv", csv.str());
  write_metadata(cfg, "sweep");
  std::cout << "sweep: " << result.rows.size() << " rows -> "
            << (fs::path(cfg.out_dir) / "sweep.csv").string() << "\n";
  return result.all_converged ? kExitOk : kExitNonConvergence;
}

int cmd_validate(const Overrides& ov) {
  const ExperimentConfig cfg = load_config(ov);
  const spadaac::ValidationResult result = spadaac::run_validation(cfg);
  std::ostringstream csv;
  spadaac::write_validation_csv(csv, result.rows);
  write_file(fs::path(cfg.out_dir) / "validation.csv", csv.str());
  write_file(fs::path(cfg.out_dir) / "validation_summary.json",
             spadaac::validation_summary(result, cfg.validation).dump(2) + "\n");
  if (cfg.validation.dump_histograms) {
    for (std::size_t i = 0; i < result.histograms.size(); ++i) {
      std::ostringstream hist;
      spadaac::write_histogram_csv(hist, result.histograms[i]);
      write_file(fs::path(cfg.out_dir) / ("hist_" + std::to_string(i) + ".csv"),
                 hist.str());
    }
  }
  write_metadata(cfg, "validate");
  std::cout << "validation: max_tv=" << spadaac::format_double(result.max_tv)
            << " max_abs_z=" << spadaac::format_double(result.max_abs_z)
            << (result.pass ? " PASS" : " FAIL") << "\n";
  return result.pass ? kExitOk : kExitValidation;
}

int cmd_scan_concavity(const Overrides& ov) {
  const ExperimentConfig cfg = load_config(ov);
  const auto rows = spadaac::run_concavity_scan(cfg);
  std::ostringstream csv;
  spadaac::write_concavity_csv(csv, rows);
  write_file(fs::path(cfg.out_dir) / "concavity.csv", csv.str());
  write_metadata(cfg, "scan-concavity");
  double max_d2 = -1e300;
  for (const auto& r : rows) max_d2 = std::max(max_d2, r.d2);
  std::cout << "concavity scan: " << rows.size()
            << " points, max d2I=" << spadaac::format_double(max_d2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-counting SPAD receiver analysis and attenuation control"};
  app.set_version_flag("--version", spadaac::kVersion);
  app.require_subcommand(1);

  Overrides ov;
  app.add_option("--config", ov.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", ov.out_dir, "Output directory (overrides config)");
  app.add_option("--seed", ov.seed, "Simulation seed (overrides config)");
  app.add_option("--trials", ov.trials, "Monte Carlo trials (overrides config)");
  app.add_option("--algorithm", ov.algorithm,
                 "Restrict to one algorithm: none|rate-max|trigger");
  app.add_option("--threads", ov.threads, "Worker threads (0 = auto)");

  auto* optimize = app.add_subcommand("optimize", "Solve one operating point");
  auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid");
  auto* validate = app.add_subcommand("validate", "Monte Carlo oracle comparison");
  auto* scan = app.add_subcommand("scan-concavity", "Rate second-derivative contour");

  try {
    app.parse(argc, argv);
    if (optimize->parsed()) return cmd_optimize(ov);
    if (sweep->parsed()) return cmd_sweep(ov);
    if (validate->parsed()) return cmd_validate(ov);
    if (scan->parsed()) return cmd_scan_concavity(ov);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  } catch (const spadaac::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
