// Experiment configuration, sweep orchestration and validation reporting.
// Everything here is deterministic given the config and seed: grid rows are
// assembled in grid order regardless of worker scheduling, and all emitted
// numbers use locale-free shortest round-trip formatting.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spadaac/aac.hpp"
#include "spadaac/error_rate.hpp"
#include "spadaac/rate.hpp"
#include "spadaac/simulator.hpp"

namespace spadaac {

/// One sweep axis: a named parameter with explicit grid values.
/// Valid names: lambda_s, lambda_b, gates.
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct ValidationSettings {
  double tv_threshold = 0.02;
  double z_threshold = 4.0;
  // Mixing weight of a uniform PMF into the analytic PMFs before comparison.
  // Zero in normal operation; nonzero values are a negative control proving
  // the harness detects a wrong model.
  double pmf_perturbation = 0.0;
  bool dump_histograms = false;
};

struct ConcavityGridSettings {
  double lambda_s_min = 1.0;
  double lambda_s_max = 100.0;
  int lambda_s_points = 100;
  std::vector<double> lambda_b_values = {0.1, 10.0, 50.0};
  int alpha_points = 50;
};

struct ExperimentConfig {
  ReceiverConfig receiver;
  int constellation_order = 4;
  std::optional<std::vector<double>> constellation_levels;  // overrides order
  ChannelEstimate channel{50.0, 10.0};
  std::optional<double> sbr;  // when set, lambda_b is derived as lambda_s/sbr
  SolverSettings solver;
  std::vector<AacAlgorithm> algorithms = {AacAlgorithm::None, AacAlgorithm::RateMax,
                                          AacAlgorithm::TriggerCriterion};
  std::vector<SweepAxis> axes;
  SimulationPlan plan;
  ValidationSettings validation;
  ConcavityGridSettings concavity;
  std::string out_dir = "out";
  int threads = 0;

  Constellation constellation_for(double lambda_s) const;
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_file(const std::string& path);
/// Fully resolved config with every defaulted parameter materialized.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Run-metadata record: tool name, version, subcommand, resolved config.
nlohmann::json run_metadata(const ExperimentConfig& cfg, const std::string& subcommand);

/// One evaluated grid point for one algorithm.
struct SweepRow {
  double lambda_s = 0.0;
  double lambda_b = 0.0;
  AacAlgorithm algorithm = AacAlgorithm::None;
  double alpha_opt = 1.0;
  double rate_bits = 0.0;
  double avg_trigger = 0.0;
  double ser = 0.0;  // NaN when ML thresholds are degenerate at saturation
  int k_max = 0;
  int gates = 0;
  bool converged = true;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool all_converged = true;
};

/// Expands the configured axes (cartesian, last axis fastest) and evaluates
/// every (grid point, algorithm) pair.
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Fixed-schema CSV used by the sweep subcommand.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Single-point evaluation with all configured algorithms side by side.
nlohmann::json run_point(const ExperimentConfig& cfg);

/// Oracle comparison row: TV distance per symbol plus an SER z-score per
/// (point, algorithm).
struct ValidationRow {
  double lambda_s = 0.0;
  double lambda_b = 0.0;
  AacAlgorithm algorithm = AacAlgorithm::None;
  double alpha = 1.0;
  int symbol = 0;
  double tv = 0.0;
  double ser_analytic = 0.0;
  double ser_empirical = 0.0;
  double z = 0.0;
};

struct ValidationResult {
  std::vector<ValidationRow> rows;
  std::vector<EmpiricalCounts> histograms;  // populated when dump_histograms
  double max_tv = 0.0;
  double max_abs_z = 0.0;
  bool pass = true;
};

/// Runs the event simulator against the analytic PMFs and SER over the
/// configured grid (or the single configured point when no axes are given).
ValidationResult run_validation(const ExperimentConfig& cfg);

void write_validation_csv(std::ostream& os, const std::vector<ValidationRow>& rows);
nlohmann::json validation_summary(const ValidationResult& result,
                                  const ValidationSettings& settings);

/// Concavity contour rows from the configured grid.
std::vector<ConcavityPoint> run_concavity_scan(const ExperimentConfig& cfg);

}  // namespace spadaac
