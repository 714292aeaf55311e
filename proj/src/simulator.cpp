#include "spadaac/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <string>

#include "spadaac/count_model.hpp"
#include "spadaac/numerics.hpp"

namespace spadaac {

namespace {

// Substream tags keep the per-trial RNG streams of different purposes and
// symbols disjoint under one master seed.
constexpr std::uint64_t kTagCounts = 0x636F756E74ULL;  // "count"
constexpr std::uint64_t kTagSer = 0x736572ULL;         // "ser"

struct GateLayout {
  double period;
  double gate;
  double symbol_duration;
  int gates_per_pixel;
  int pixels;
};

GateLayout layout_of(const ReceiverConfig& cfg) {
  return {cfg.dead_time_ns + cfg.gate_duration_ns, cfg.gate_duration_ns,
          cfg.symbol_duration_ns, gates_per_pixel(cfg), cfg.array_size};
}

// One symbol through the per-gate Bernoulli model.
int run_bernoulli_trial(SplitMix64& rng, double p_tri, int kmax) {
  int count = 0;
  for (int g = 0; g < kmax; ++g) {
    if (rng.next_double() < p_tri) ++count;
  }
  return count;
}

// One symbol through the arrival-process model. detected_rate is the thinned
// (post-PDE, post-attenuation) arrival rate in counts/ns including dark
// carriers. Gates tile each pixel's timeline with period gate+dead; a trigger
// closes its gate immediately and the pixel recovers for at least the dead
// time before the next gate opens. The final, possibly partial, gate counts.
int run_arrival_trial(SplitMix64& rng, double detected_rate, const GateLayout& gl) {
  if (detected_rate <= 0.0) return 0;
  // last gate index that already triggered, per pixel
  std::vector<int> last_trig(static_cast<std::size_t>(gl.pixels), -1);
  int count = 0;
  double t = rng.next_exponential(detected_rate);
  while (t < gl.symbol_duration) {
    const double cycles = std::floor(t / gl.period);
    const int gate_idx = static_cast<int>(cycles);
    if (t - cycles * gl.period < gl.gate) {
      const int px = gl.pixels == 1
                         ? 0
                         : std::min(static_cast<int>(rng.next_double() * gl.pixels),
                                    gl.pixels - 1);
      auto& last = last_trig[static_cast<std::size_t>(px)];
      if (last < gate_idx) {
        last = gate_idx;
        ++count;
      }
    }
    t += rng.next_exponential(detected_rate);
  }
  return count;
}

}  // namespace

SimulationMode simulation_mode_from_string(const std::string& name) {
  if (name == "per-gate-bernoulli") return SimulationMode::PerGateBernoulli;
  if (name == "arrival-process") return SimulationMode::ArrivalProcess;
  throw ConfigError("unknown simulation mode '" + name +
                    "' (expected per-gate-bernoulli|arrival-process)");
}

std::string to_string(SimulationMode m) {
  return m == SimulationMode::PerGateBernoulli ? "per-gate-bernoulli"
                                               : "arrival-process";
}

void SimulationPlan::validate() const {
  if (trials < 1) throw ConfigError("simulation: trials must be >= 1");
}

double EmpiricalCounts::tv_distance(int symbol, const std::vector<double>& pmf) const {
  const auto& hist = histograms[static_cast<std::size_t>(symbol)];
  KahanSum acc;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double emp = static_cast<double>(hist[k]) / static_cast<double>(trials);
    acc.add(std::abs(emp - pmf[k]));
  }
  return 0.5 * acc.value();
}

double EmpiricalSer::std_error() const {
  if (trials == 0) return 0.0;
  const double p = ser();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

EmpiricalCounts simulate_counts(const ReceiverConfig& cfg, const ChannelEstimate& est,
                                const Constellation& constellation, double alpha,
                                const SimulationPlan& plan) {
  check_attenuation(alpha);
  plan.validate();
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  const GateLayout gl = layout_of(cfg);
  const int kmax = k_max(cfg);
  const int M = em.order();

  EmpiricalCounts out;
  out.trials = plan.trials;
  out.histograms.assign(static_cast<std::size_t>(M),
                        std::vector<std::uint64_t>(static_cast<std::size_t>(kmax) + 1, 0));

  for (int m = 0; m < M; ++m) {
    const double x = em.exponent(m, alpha);
    const double p_tri = -std::expm1(-x);
    const double detected_rate = x / cfg.gate_duration_ns;
    auto& hist = out.histograms[static_cast<std::size_t>(m)];
    std::mutex merge_mutex;
    parallel_chunks(plan.trials, plan.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<std::uint64_t> local(static_cast<std::size_t>(kmax) + 1, 0);
      for (std::size_t i = lo; i < hi; ++i) {
        SplitMix64 rng(substream_state(plan.seed, kTagCounts + static_cast<std::uint64_t>(m) * 0x10000ULL, i));
        const int count = plan.mode == SimulationMode::PerGateBernoulli
                              ? run_bernoulli_trial(rng, p_tri, kmax)
                              : run_arrival_trial(rng, detected_rate, gl);
        ++local[static_cast<std::size_t>(count)];
      }
      const std::lock_guard<std::mutex> lock(merge_mutex);
      for (std::size_t k = 0; k < local.size(); ++k) hist[k] += local[k];
    });
  }
  return out;
}

EmpiricalSer simulate_ser(const ReceiverConfig& cfg, const ChannelEstimate& est,
                          const Constellation& constellation, double alpha,
                          const DecisionRule& rule, const SimulationPlan& plan) {
  check_attenuation(alpha);
  plan.validate();
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  const GateLayout gl = layout_of(cfg);
  const int kmax = k_max(cfg);
  const int M = em.order();
  rule.validate(kmax);

  std::vector<double> p_tri(static_cast<std::size_t>(M));
  std::vector<double> detected_rate(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    const double x = em.exponent(m, alpha);
    p_tri[static_cast<std::size_t>(m)] = -std::expm1(-x);
    detected_rate[static_cast<std::size_t>(m)] = x / cfg.gate_duration_ns;
  }

  EmpiricalSer out;
  out.trials = plan.trials;
  std::mutex merge_mutex;
  parallel_chunks(plan.trials, plan.threads, [&](std::size_t lo, std::size_t hi) {
    std::uint64_t local_errors = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      SplitMix64 rng(substream_state(plan.seed, kTagSer, i));
      const int m = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(M));
      const std::size_t mi = static_cast<std::size_t>(m);
      const int count = plan.mode == SimulationMode::PerGateBernoulli
                            ? run_bernoulli_trial(rng, p_tri[mi], kmax)
                            : run_arrival_trial(rng, detected_rate[mi], gl);
      if (rule.classify(static_cast<double>(count)) != m) ++local_errors;
    }
    const std::lock_guard<std::mutex> lock(merge_mutex);
    out.errors += local_errors;
  });
  return out;
}

void write_histogram_csv(std::ostream& os, const EmpiricalCounts& counts) {
  os << "symbol,k,count\n";
  for (std::size_t m = 0; m < counts.histograms.size(); ++m) {
    const auto& hist = counts.histograms[m];
    for (std::size_t k = 0; k < hist.size(); ++k) {
      os << m << ',' << k << ',' << hist[k] << '\n';
    }
  }
}

}  // namespace spadaac
