// Automatic attenuation control: solves for the attenuation coefficient that
// maximizes the achievable rate (exploiting its concavity), or the
// low-complexity variant that pins the average trigger probability to a
// target via Newton-Raphson.
#pragma once

#include <string>

#include "spadaac/channel.hpp"

namespace spadaac {

enum class AacAlgorithm { None, RateMax, TriggerCriterion };

std::string to_string(AacAlgorithm a);
AacAlgorithm algorithm_from_string(const std::string& name);

struct SolverSettings {
  double epsilon = 1e-9;      // convergence accuracy on the squared criterion
  int t_max = 100;            // iteration cap
  double alpha_floor = 1e-12; // numerical stand-in for the open bound alpha > 0
  double trigger_target = 0.7;

  void validate() const;
};

struct AacSolution {
  double alpha_opt = 1.0;
  double rate_bits = 0.0;
  double avg_trigger = 0.0;
  double effective_signal_rate = 0.0;     // alpha_opt * signal rate
  double effective_background_rate = 0.0; // alpha_opt * background rate
  int iterations = 0;
  bool converged = true;
  AacAlgorithm algorithm = AacAlgorithm::None;
};

/// Maximizes the achievable rate over [alpha_floor, 1]. The objective is
/// concave in alpha, so the solver runs safeguarded Newton/bisection on the
/// analytic first derivative, with a golden-section fallback on the rate
/// itself when derivative magnitudes underflow. If the rate is still
/// increasing at alpha = 1 the boundary is optimal and no attenuation is
/// applied. Ties prefer the largest alpha in the optimal set.
AacSolution solve_rate_max(const ReceiverConfig& cfg, const ChannelEstimate& est,
                           const Constellation& constellation,
                           const SolverSettings& settings = {});

/// Drives the average trigger probability to the target (default 0.7) by
/// Newton-Raphson on h(alpha) = avg_trigger(alpha) - target, safeguarded by
/// bracketing bisection. h is strictly increasing, so if h(1) <= 0 the
/// minimizer of |h| is alpha = 1 (the target is unreachable without
/// amplification); if h(alpha_floor) >= 0 the floor is returned flagged as
/// non-converged.
AacSolution solve_trigger_criterion(const ReceiverConfig& cfg,
                                    const ChannelEstimate& est,
                                    const Constellation& constellation,
                                    const SolverSettings& settings = {});

/// Attenuation that maps incident rates onto target effective rates:
/// (target_signal + target_background) / (signal + background).
double attenuation_from_targets(const ChannelEstimate& est,
                                double target_signal_rate,
                                double target_background_rate);

/// Evaluates a fixed-attenuation baseline (algorithm None) with the same
/// diagnostics as the solvers.
AacSolution evaluate_fixed_attenuation(const ReceiverConfig& cfg,
                                       const ChannelEstimate& est,
                                       const Constellation& constellation,
                                       double alpha);

}  // namespace spadaac
