// Event-level Monte Carlo oracle for the gated SPAD array: Poisson photon
// arrivals, per-pixel gate windows with dead time, binary triggers (no
// photon-number resolution). Validates the closed-form count statistics.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spadaac/channel.hpp"
#include "spadaac/error_rate.hpp"

namespace spadaac {

enum class SimulationMode {
  // One Bernoulli trigger per gate slot at the closed-form trigger
  // probability; the direct sampling analogue of the binomial model.
  PerGateBernoulli,
  // Exponential inter-arrival times across the symbol, per-pixel periodic
  // gate/dead tiling, at most one trigger per gate. Tests whether the gate
  // packing actually justifies the binomial model.
  ArrivalProcess,
};

SimulationMode simulation_mode_from_string(const std::string& name);
std::string to_string(SimulationMode m);

struct SimulationPlan {
  std::uint64_t trials = 100000;  // symbols simulated per constellation point
  std::uint64_t seed = 1;
  SimulationMode mode = SimulationMode::PerGateBernoulli;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Per-symbol count histograms over 0..k_max; every histogram sums to the
/// trial count.
struct EmpiricalCounts {
  std::vector<std::vector<std::uint64_t>> histograms;  // order x (k_max+1)
  std::uint64_t trials = 0;

  /// Total-variation distance between one empirical histogram and a PMF.
  double tv_distance(int symbol, const std::vector<double>& pmf) const;
};

/// Simulated error count with its binomial uncertainty.
struct EmpiricalSer {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;

  double ser() const { return trials ? static_cast<double>(errors) / trials : 0.0; }
  /// Standard error of the estimate (binomial).
  double std_error() const;
};

EmpiricalCounts simulate_counts(const ReceiverConfig& cfg, const ChannelEstimate& est,
                                const Constellation& constellation, double alpha,
                                const SimulationPlan& plan);

/// Draws symbols uniformly, simulates their counts, applies the decision
/// rule, and returns the error fraction.
EmpiricalSer simulate_ser(const ReceiverConfig& cfg, const ChannelEstimate& est,
                          const Constellation& constellation, double alpha,
                          const DecisionRule& rule, const SimulationPlan& plan);

/// CSV dump: header `symbol,k,count`.
void write_histogram_csv(std::ostream& os, const EmpiricalCounts& counts);

}  // namespace spadaac
