#include "spadaac/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

#include "spadaac/format.hpp"
#include "spadaac/numerics.hpp"
#include "spadaac/version.hpp"

namespace spadaac {

namespace {

using nlohmann::json;

// Pulls a scalar with type checking; leaves `out` untouched when absent.
template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::vector<double> axis_values(const json& jaxis, const std::string& name) {
  std::vector<double> values;
  if (jaxis.contains("values")) {
    values = jaxis.at("values").get<std::vector<double>>();
  } else {
    double lo = 0.0, hi = 0.0;
    int points = 0;
    read_field(jaxis, "min", lo);
    read_field(jaxis, "max", hi);
    read_field(jaxis, "points", points);
    if (points < 1) throw ConfigError("axis '" + name + "': points must be >= 1");
    if (points == 1) {
      values.push_back(lo);
    } else {
      if (!(hi > lo)) throw ConfigError("axis '" + name + "': max must exceed min");
      for (int i = 0; i < points; ++i)
        values.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    }
  }
  if (values.empty()) throw ConfigError("axis '" + name + "': no values");
  return values;
}

void check_axis_name(const std::string& name) {
  static const std::set<std::string> valid = {"lambda_s", "lambda_b", "gates"};
  if (!valid.count(name))
    throw ConfigError("unknown sweep axis '" + name +
                      "' (valid axes: gates, lambda_b, lambda_s)");
}

struct PointSpec {
  double lambda_s;
  double lambda_b;
  int gates;  // 0 = use the configured receiver as-is
};

// Cartesian grid expansion, last axis fastest.
std::vector<PointSpec> expand_grid(const ExperimentConfig& cfg) {
  std::vector<PointSpec> points;
  PointSpec base{cfg.channel.signal_rate_cpns, cfg.channel.background_rate_cpns, 0};
  points.push_back(base);
  for (const auto& axis : cfg.axes) {
    std::vector<PointSpec> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points) {
      for (double v : axis.values) {
        PointSpec q = p;
        if (axis.name == "lambda_s") {
          q.lambda_s = v;
        } else if (axis.name == "lambda_b") {
          q.lambda_b = v;
        } else {  // gates
          if (v < 1.0 || v != std::floor(v))
            throw ConfigError("gates axis values must be positive integers");
          q.gates = static_cast<int>(v);
        }
        next.push_back(q);
      }
    }
    points = std::move(next);
  }
  if (cfg.sbr.has_value()) {
    for (auto& p : points) p.lambda_b = p.lambda_s / *cfg.sbr;
  }
  return points;
}

ReceiverConfig receiver_for(const ExperimentConfig& cfg, const PointSpec& p) {
  ReceiverConfig rx = cfg.receiver;
  if (p.gates > 0) {
    // Sweep the gate count by stretching the symbol duration; per-gate rates
    // and exponents are unchanged.
    rx.symbol_duration_ns = (rx.dead_time_ns + rx.gate_duration_ns) * p.gates;
  }
  return rx;
}

AacSolution solve_for(const ExperimentConfig& cfg, const ReceiverConfig& rx,
                      const ChannelEstimate& est, const Constellation& cons,
                      AacAlgorithm alg) {
  switch (alg) {
    case AacAlgorithm::RateMax:
      return solve_rate_max(rx, est, cons, cfg.solver);
    case AacAlgorithm::TriggerCriterion:
      return solve_trigger_criterion(rx, est, cons, cfg.solver);
    case AacAlgorithm::None:
    default:
      return evaluate_fixed_attenuation(rx, est, cons, 1.0);
  }
}

double ser_or_nan(const CountModel& model) {
  try {
    return symbol_error_rate(model, ml_thresholds(model)).ser;
  } catch (const SaturatedSymbolError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

json solution_to_json(const AacSolution& s) {
  return json{{"algorithm", to_string(s.algorithm)},
              {"alpha_opt", s.alpha_opt},
              {"rate_bits", s.rate_bits},
              {"avg_trigger", s.avg_trigger},
              {"effective_signal_rate", s.effective_signal_rate},
              {"effective_background_rate", s.effective_background_rate},
              {"iterations", s.iterations},
              {"converged", s.converged}};
}

}  // namespace

Constellation ExperimentConfig::constellation_for(double lambda_s) const {
  if (constellation_levels.has_value()) {
    Constellation c{*constellation_levels};
    return c;
  }
  return square_root_constellation(lambda_s, constellation_order);
}

void ExperimentConfig::validate() const {
  receiver.validate();
  channel.validate();
  solver.validate();
  plan.validate();
  if (!constellation_levels.has_value() && constellation_order < 2)
    throw InvalidOrderError("constellation order must be >= 2");
  if (sbr.has_value() && !(*sbr > 0.0)) throw ConfigError("sbr must be > 0");
  if (algorithms.empty()) throw ConfigError("at least one algorithm required");
  for (const auto& axis : axes) check_axis_name(axis.name);
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("receiver")) {
    const auto& r = j.at("receiver");
    read_field(r, "pde", cfg.receiver.pde);
    read_field(r, "array_size", cfg.receiver.array_size);
    read_field(r, "symbol_duration_ns", cfg.receiver.symbol_duration_ns);
    read_field(r, "dead_time_ns", cfg.receiver.dead_time_ns);
    read_field(r, "gate_duration_ns", cfg.receiver.gate_duration_ns);
    read_field(r, "dark_rate_cpns", cfg.receiver.dark_rate_cpns);
    read_field(r, "attenuate_dark_counts", cfg.receiver.attenuate_dark_counts);
  }
  if (j.contains("channel")) {
    const auto& c = j.at("channel");
    read_field(c, "signal_rate_cpns", cfg.channel.signal_rate_cpns);
    read_field(c, "background_rate_cpns", cfg.channel.background_rate_cpns);
    if (c.contains("sbr") && !c.at("sbr").is_null())
      cfg.sbr = c.at("sbr").get<double>();
  }
  if (j.contains("constellation")) {
    const auto& c = j.at("constellation");
    read_field(c, "order", cfg.constellation_order);
    if (c.contains("levels_cpns") && !c.at("levels_cpns").is_null())
      cfg.constellation_levels = c.at("levels_cpns").get<std::vector<double>>();
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    read_field(s, "epsilon", cfg.solver.epsilon);
    read_field(s, "t_max", cfg.solver.t_max);
    read_field(s, "alpha_floor", cfg.solver.alpha_floor);
    read_field(s, "trigger_target", cfg.solver.trigger_target);
  }
  if (j.contains("algorithms")) {
    cfg.algorithms.clear();
    for (const auto& name : j.at("algorithms"))
      cfg.algorithms.push_back(algorithm_from_string(name.get<std::string>()));
  }
  if (j.contains("sweep") && j.at("sweep").contains("axes")) {
    for (const auto& jaxis : j.at("sweep").at("axes")) {
      SweepAxis axis;
      axis.name = jaxis.at("name").get<std::string>();
      check_axis_name(axis.name);
      axis.values = axis_values(jaxis, axis.name);
      cfg.axes.push_back(std::move(axis));
    }
  }
  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    read_field(s, "trials", cfg.plan.trials);
    read_field(s, "seed", cfg.plan.seed);
    if (s.contains("mode"))
      cfg.plan.mode = simulation_mode_from_string(s.at("mode").get<std::string>());
  }
  if (j.contains("validation")) {
    const auto& v = j.at("validation");
    read_field(v, "tv_threshold", cfg.validation.tv_threshold);
    read_field(v, "z_threshold", cfg.validation.z_threshold);
    read_field(v, "pmf_perturbation", cfg.validation.pmf_perturbation);
    read_field(v, "dump_histograms", cfg.validation.dump_histograms);
  }
  if (j.contains("concavity")) {
    const auto& c = j.at("concavity");
    read_field(c, "lambda_s_min", cfg.concavity.lambda_s_min);
    read_field(c, "lambda_s_max", cfg.concavity.lambda_s_max);
    read_field(c, "lambda_s_points", cfg.concavity.lambda_s_points);
    if (c.contains("lambda_b_values"))
      cfg.concavity.lambda_b_values = c.at("lambda_b_values").get<std::vector<double>>();
    read_field(c, "alpha_points", cfg.concavity.alpha_points);
  }
  if (j.contains("output")) read_field(j.at("output"), "dir", cfg.out_dir);
  read_field(j, "threads", cfg.threads);
  cfg.plan.threads = cfg.threads;
  cfg.validate();
  return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json axes = json::array();
  for (const auto& a : cfg.axes)
    axes.push_back(json{{"name", a.name}, {"values", a.values}});
  json algorithms = json::array();
  for (auto a : cfg.algorithms) algorithms.push_back(to_string(a));
  return json{
      {"receiver",
       {{"pde", cfg.receiver.pde},
        {"array_size", cfg.receiver.array_size},
        {"symbol_duration_ns", cfg.receiver.symbol_duration_ns},
        {"dead_time_ns", cfg.receiver.dead_time_ns},
        {"gate_duration_ns", cfg.receiver.gate_duration_ns},
        {"dark_rate_cpns", cfg.receiver.dark_rate_cpns},
        {"attenuate_dark_counts", cfg.receiver.attenuate_dark_counts}}},
      {"channel",
       {{"signal_rate_cpns", cfg.channel.signal_rate_cpns},
        {"background_rate_cpns", cfg.channel.background_rate_cpns},
        {"sbr", cfg.sbr.has_value() ? json(*cfg.sbr) : json(nullptr)}}},
      {"constellation",
       {{"order", cfg.constellation_order},
        {"levels_cpns", cfg.constellation_levels.has_value()
                            ? json(*cfg.constellation_levels)
                            : json(nullptr)}}},
      {"solver",
       {{"epsilon", cfg.solver.epsilon},
        {"t_max", cfg.solver.t_max},
        {"alpha_floor", cfg.solver.alpha_floor},
        {"trigger_target", cfg.solver.trigger_target}}},
      {"algorithms", algorithms},
      {"sweep", {{"axes", axes}}},
      {"simulation",
       {{"trials", cfg.plan.trials},
        {"seed", cfg.plan.seed},
        {"mode", to_string(cfg.plan.mode)}}},
      {"validation",
       {{"tv_threshold", cfg.validation.tv_threshold},
        {"z_threshold", cfg.validation.z_threshold},
        {"pmf_perturbation", cfg.validation.pmf_perturbation},
        {"dump_histograms", cfg.validation.dump_histograms}}},
      {"concavity",
       {{"lambda_s_min", cfg.concavity.lambda_s_min},
        {"lambda_s_max", cfg.concavity.lambda_s_max},
        {"lambda_s_points", cfg.concavity.lambda_s_points},
        {"lambda_b_values", cfg.concavity.lambda_b_values},
        {"alpha_points", cfg.concavity.alpha_points}}},
      // the worker-thread count is execution infrastructure, not part of the
      // experiment definition, so it stays out of the resolved record
      {"output", {{"dir", cfg.out_dir}}}};
}

json run_metadata(const ExperimentConfig& cfg, const std::string& subcommand) {
  return json{{"tool", "spadaac"},
              {"version", kVersion},
              {"subcommand", subcommand},
              {"config", config_to_json(cfg)}};
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.axes.empty()) throw ConfigError("sweep requires at least one axis");
  const std::vector<PointSpec> points = expand_grid(cfg);
  const std::size_t algs = cfg.algorithms.size();

  SweepResult result;
  result.rows.assign(points.size() * algs, SweepRow{});
  parallel_chunks(points.size(), cfg.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const PointSpec& p = points[i];
      const ReceiverConfig rx = receiver_for(cfg, p);
      const ChannelEstimate est{p.lambda_s, p.lambda_b};
      const Constellation cons = cfg.constellation_for(p.lambda_s);
      for (std::size_t a = 0; a < algs; ++a) {
        SweepRow& row = result.rows[i * algs + a];
        row.lambda_s = p.lambda_s;
        row.lambda_b = p.lambda_b;
        row.algorithm = cfg.algorithms[a];
        row.gates = gates_per_pixel(rx);
        row.k_max = k_max(rx);
        const AacSolution sol = solve_for(cfg, rx, est, cons, cfg.algorithms[a]);
        row.alpha_opt = sol.alpha_opt;
        row.rate_bits = sol.rate_bits;
        row.avg_trigger = sol.avg_trigger;
        row.converged = sol.converged;
        row.ser = ser_or_nan(count_pmf(rx, est, cons, sol.alpha_opt));
      }
    }
  });
  for (const auto& row : result.rows)
    if (!row.converged) result.all_converged = false;
  return result;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "lambda_s,lambda_b,algorithm,alpha_opt,rate_bits,avg_trigger,ser,k_max,gates\n";
  for (const auto& r : rows) {
    os << format_double(r.lambda_s) << ',' << format_double(r.lambda_b) << ','
       << to_string(r.algorithm) << ',' << format_double(r.alpha_opt) << ','
       << format_double(r.rate_bits) << ',' << format_double(r.avg_trigger) << ','
       << format_double(r.ser) << ',' << r.k_max << ',' << r.gates << '\n';
  }
}

json run_point(const ExperimentConfig& cfg) {
  cfg.validate();
  const ReceiverConfig& rx = cfg.receiver;
  const ChannelEstimate& est = cfg.channel;
  ChannelEstimate point_est = est;
  if (cfg.sbr.has_value()) point_est.background_rate_cpns = est.signal_rate_cpns / *cfg.sbr;
  const Constellation cons = cfg.constellation_for(point_est.signal_rate_cpns);

  json solutions = json::object();
  for (AacAlgorithm alg : cfg.algorithms) {
    const AacSolution sol = solve_for(cfg, rx, point_est, cons, alg);
    const CountModel model = count_pmf(rx, point_est, cons, sol.alpha_opt);
    const RateReport rr = rate_report(rx, point_est, cons, sol.alpha_opt);
    json entry = solution_to_json(sol);
    entry["rate_report"] = {{"rate_bits", rr.rate_bits}, {"d1", rr.d1}, {"d2", rr.d2}};
    try {
      const SerReport ser = symbol_error_rate(model, ml_thresholds(model));
      entry["ser"] = {{"ser", ser.ser}, {"per_symbol_error", ser.per_symbol_error}};
    } catch (const SaturatedSymbolError& e) {
      entry["ser"] = {{"error", e.what()}};
    }
    solutions[to_string(alg)] = std::move(entry);
  }
  json out = run_metadata(cfg, "optimize");
  out["point"] = {{"lambda_s", point_est.signal_rate_cpns},
                  {"lambda_b", point_est.background_rate_cpns},
                  {"k_max", k_max(rx)},
                  {"gates", gates_per_pixel(rx)},
                  {"solutions", solutions}};
  return out;
}

ValidationResult run_validation(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<PointSpec> points = expand_grid(cfg);
  ValidationResult result;

  for (const PointSpec& p : points) {
    const ReceiverConfig rx = receiver_for(cfg, p);
    const ChannelEstimate est{p.lambda_s, p.lambda_b};
    const Constellation cons = cfg.constellation_for(p.lambda_s);
    for (AacAlgorithm alg : cfg.algorithms) {
      const AacSolution sol = solve_for(cfg, rx, est, cons, alg);
      const double alpha = sol.alpha_opt;
      CountModel model = count_pmf(rx, est, cons, alpha);
      // Optional negative control: blend a uniform PMF into the analytic
      // model so TV comparisons must fail by a known margin.
      if (cfg.validation.pmf_perturbation > 0.0) {
        const double eps = cfg.validation.pmf_perturbation;
        const double uniform = 1.0 / static_cast<double>(model.k_max + 1);
        for (auto& row : model.pmfs)
          for (auto& v : row) v = (1.0 - eps) * v + eps * uniform;
      }
      SimulationPlan plan = cfg.plan;
      plan.threads = cfg.threads;
      const EmpiricalCounts counts = simulate_counts(rx, est, cons, alpha, plan);

      double ser_analytic = std::numeric_limits<double>::quiet_NaN();
      double ser_empirical = std::numeric_limits<double>::quiet_NaN();
      double z = 0.0;
      try {
        const DecisionRule rule = ml_thresholds(model);
        ser_analytic = symbol_error_rate(model, rule).ser;
        const EmpiricalSer emp = simulate_ser(rx, est, cons, alpha, rule, plan);
        ser_empirical = emp.ser();
        const double se =
            std::sqrt(ser_analytic * (1.0 - ser_analytic) / static_cast<double>(plan.trials));
        if (se > 0.0) {
          z = (ser_empirical - ser_analytic) / se;
        } else {
          z = ser_empirical == ser_analytic ? 0.0
                                            : std::numeric_limits<double>::infinity();
        }
      } catch (const SaturatedSymbolError&) {
        // Degenerate thresholds: TV comparison still runs below.
      }

      for (int m = 0; m < model.order(); ++m) {
        ValidationRow row;
        row.lambda_s = p.lambda_s;
        row.lambda_b = p.lambda_b;
        row.algorithm = alg;
        row.alpha = alpha;
        row.symbol = m;
        row.tv = counts.tv_distance(m, model.pmfs[static_cast<std::size_t>(m)]);
        row.ser_analytic = ser_analytic;
        row.ser_empirical = ser_empirical;
        row.z = z;
        result.max_tv = std::max(result.max_tv, row.tv);
        result.rows.push_back(row);
      }
      if (std::isfinite(z)) result.max_abs_z = std::max(result.max_abs_z, std::abs(z));
      if (cfg.validation.dump_histograms) result.histograms.push_back(counts);
    }
  }
  result.pass = result.max_tv <= cfg.validation.tv_threshold &&
                result.max_abs_z <= cfg.validation.z_threshold;
  return result;
}

void write_validation_csv(std::ostream& os, const std::vector<ValidationRow>& rows) {
  os << "lambda_s,lambda_b,algorithm,alpha,symbol,tv,ser_analytic,ser_empirical,z\n";
  for (const auto& r : rows) {
    os << format_double(r.lambda_s) << ',' << format_double(r.lambda_b) << ','
       << to_string(r.algorithm) << ',' << format_double(r.alpha) << ',' << r.symbol
       << ',' << format_double(r.tv) << ',' << format_double(r.ser_analytic) << ','
       << format_double(r.ser_empirical) << ',' << format_double(r.z) << '\n';
  }
}

json validation_summary(const ValidationResult& result,
                        const ValidationSettings& settings) {
  return json{{"max_tv", result.max_tv},
              {"max_abs_z", result.max_abs_z},
              {"tv_threshold", settings.tv_threshold},
              {"z_threshold", settings.z_threshold},
              {"rows", result.rows.size()},
              {"pass", result.pass}};
}

std::vector<ConcavityPoint> run_concavity_scan(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& g = cfg.concavity;
  if (g.lambda_s_points < 1 || g.alpha_points < 1 || g.lambda_b_values.empty())
    throw ConfigError("concavity grid: points must be >= 1 and lambda_b non-empty");
  std::vector<double> ls;
  for (int i = 0; i < g.lambda_s_points; ++i) {
    ls.push_back(g.lambda_s_points == 1
                     ? g.lambda_s_min
                     : g.lambda_s_min + (g.lambda_s_max - g.lambda_s_min) *
                                            static_cast<double>(i) /
                                            (g.lambda_s_points - 1));
  }
  std::vector<double> alphas;
  for (int i = 1; i <= g.alpha_points; ++i)
    alphas.push_back(static_cast<double>(i) / g.alpha_points);
  return concavity_scan(cfg.receiver, ls, g.lambda_b_values, alphas,
                        cfg.constellation_order);
}

}  // namespace spadaac
