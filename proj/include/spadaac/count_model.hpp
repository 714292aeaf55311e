// Per-symbol photon-count statistics at a given attenuation: trigger
// probabilities and binomial count PMFs, built in the log domain so large
// gate counts stay representable.
#pragma once

#include <vector>

#include "spadaac/channel.hpp"

namespace spadaac {

/// Count statistics for all constellation symbols at one attenuation value.
/// Rows are exact binomial PMFs over counts 0..k_max; each row sums to one
/// within 1e-12 by construction (checked, never rescaled).
struct CountModel {
  double attenuation = 1.0;
  int k_max = 0;
  std::vector<double> total_exponents;   // pre-attenuation per-gate exponents
  std::vector<double> exponents;         // per-gate exponents at `attenuation`
  std::vector<double> trigger_probs;     // p_tri per symbol
  std::vector<std::vector<double>> pmfs;      // order x (k_max+1)
  std::vector<std::vector<double>> log_pmfs;  // ln of pmfs (-inf where zero)

  int order() const { return static_cast<int>(trigger_probs.size()); }

  /// Diagnostic/test constructor that bypasses constellation validation and
  /// builds the binomial rows directly from trigger probabilities.
  static CountModel from_trigger_probs(int k_max,
                                       const std::vector<double>& trigger_probs,
                                       double attenuation = 1.0);
};

/// Probability that a gate triggers for symbol m at attenuation alpha:
/// 1 - exp(-x_m(alpha)), evaluated as -expm1 for accuracy at small exponents.
double trigger_probability(const ReceiverConfig& cfg, const ChannelEstimate& est,
                           const Constellation& constellation, int symbol,
                           double alpha);

/// Average trigger probability over the constellation at alpha.
double average_trigger_probability(const ReceiverConfig& cfg,
                                   const ChannelEstimate& est,
                                   const Constellation& constellation,
                                   double alpha);

/// Builds the full count model (trigger probabilities + PMF matrix).
CountModel count_pmf(const ReceiverConfig& cfg, const ChannelEstimate& est,
                     const Constellation& constellation, double alpha);

/// Mean and variance of a PMF row (compensated summation).
double pmf_mean(const std::vector<double>& row);
double pmf_variance(const std::vector<double>& row, double mean);

}  // namespace spadaac
