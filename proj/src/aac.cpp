#include "spadaac/aac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spadaac/numerics.hpp"
#include "spadaac/rate.hpp"

namespace spadaac {

namespace {

// The rate-max solver keeps refining past the paper's successive-rate stop
// rule until the derivative bracket is this tight, so the returned point
// dominates a dense grid search to well below 1e-9 in rate.
constexpr double kAlphaBracketTol = 1e-11;

// Interior roots of the trigger criterion are polished to this accuracy in
// |avg_trigger - target| regardless of the configured epsilon.
constexpr double kTriggerResidualTol = 1e-6;

double average_trigger_at(const ExponentModel& em, double alpha) {
  KahanSum acc;
  for (int m = 0; m < em.order(); ++m) acc.add(-std::expm1(-em.exponent(m, alpha)));
  return acc.value() / em.order();
}

void check_channel(const ChannelEstimate& est) {
  est.validate();
  if (est.signal_rate_cpns + est.background_rate_cpns <= 0.0)
    throw DegenerateChannelError("signal and background rates are both zero");
}

AacSolution finish_solution(const ReceiverConfig& cfg, const ChannelEstimate& est,
                            const Constellation& constellation, double alpha,
                            int iterations, bool converged, AacAlgorithm alg) {
  AacSolution s;
  s.alpha_opt = alpha;
  s.rate_bits = achievable_rate(count_pmf(cfg, est, constellation, alpha));
  s.avg_trigger = average_trigger_probability(cfg, est, constellation, alpha);
  s.effective_signal_rate = alpha * est.signal_rate_cpns;
  s.effective_background_rate = alpha * est.background_rate_cpns;
  s.iterations = iterations;
  s.converged = converged;
  s.algorithm = alg;
  return s;
}

// Golden-section maximization of fn on [lo, hi]; used when derivative
// information has underflowed. Ties drift toward the upper end because the
// final interval's upper endpoint is among the candidates returned.
double golden_section_max(const std::function<double(double)>& fn, double lo,
                          double hi, int iterations) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int i = 0; i < iterations && (b - a) > 1e-12; ++i) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = fn(x2);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

std::string to_string(AacAlgorithm a) {
  switch (a) {
    case AacAlgorithm::None: return "none";
    case AacAlgorithm::RateMax: return "rate-max";
    case AacAlgorithm::TriggerCriterion: return "trigger";
  }
  return "none";
}

AacAlgorithm algorithm_from_string(const std::string& name) {
  if (name == "none") return AacAlgorithm::None;
  if (name == "rate-max") return AacAlgorithm::RateMax;
  if (name == "trigger") return AacAlgorithm::TriggerCriterion;
  throw ConfigError("unknown algorithm '" + name + "' (expected none|rate-max|trigger)");
}

void SolverSettings::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("solver: epsilon must be > 0");
  if (t_max < 1) throw ConfigError("solver: t_max must be >= 1");
  if (!(alpha_floor > 0.0) || !(alpha_floor < 1.0))
    throw ConfigError("solver: alpha_floor must be in (0, 1)");
  if (!(trigger_target > 0.0) || !(trigger_target < 1.0))
    throw ConfigError("solver: trigger_target must be in (0, 1)");
}

AacSolution solve_rate_max(const ReceiverConfig& cfg, const ChannelEstimate& est,
                           const Constellation& constellation,
                           const SolverSettings& settings) {
  settings.validate();
  check_channel(est);
  constellation.validate();

  const auto report_at = [&](double a) { return rate_report(cfg, est, constellation, a); };
  const auto rate_at = [&](double a) { return achievable_rate(count_pmf(cfg, est, constellation, a)); };

  const RateReport at_one = report_at(1.0);
  int iterations = 0;
  bool converged = true;
  // Candidate maximizers; evaluated at the end with ties resolved toward the
  // largest alpha (attenuating is pointless when the objective is flat).
  std::vector<double> candidates = {1.0, settings.alpha_floor};

  bool boundary_optimal = at_one.d1 >= 0.0;
  if (boundary_optimal && at_one.d1 == 0.0) {
    // A derivative of exactly zero can also mean everything underflowed in a
    // deeply saturated channel. Probe the rate; if attenuation visibly helps,
    // fall back to a derivative-free search.
    for (double probe : {0.5, 0.1, 0.01, 1e-3}) {
      if (probe > settings.alpha_floor && rate_at(probe) > at_one.rate_bits + 1e-12) {
        boundary_optimal = false;
        candidates.push_back(golden_section_max(rate_at, settings.alpha_floor, 1.0, 200));
        break;
      }
    }
  }

  if (!boundary_optimal && at_one.d1 < 0.0) {
    const RateReport at_floor = report_at(settings.alpha_floor);
    if (at_floor.d1 <= 0.0) {
      // No bracket for the stationary point; the rate is numerically flat or
      // decreasing everywhere. Search directly.
      candidates.push_back(golden_section_max(rate_at, settings.alpha_floor, 1.0, 200));
    } else {
      double lo = settings.alpha_floor, hi = 1.0;
      double alpha = 1.0;
      RateReport cur = at_one;
      double prev_rate = cur.rate_bits;
      bool tol_met = false;
      while (iterations < settings.t_max) {
        ++iterations;
        // Newton step on d1 using the analytic second derivative; fall back
        // to bisection whenever the step is unusable or leaves the bracket.
        double next = std::numeric_limits<double>::quiet_NaN();
        if (cur.d2 < 0.0) next = alpha - cur.d1 / cur.d2;
        if (!std::isfinite(next) || next <= lo || next >= hi)
          next = 0.5 * (lo + hi);
        alpha = next;
        cur = report_at(alpha);
        if (cur.d1 > 0.0) {
          lo = alpha;
        } else {
          hi = alpha;
        }
        const double delta = cur.rate_bits - prev_rate;
        prev_rate = cur.rate_bits;
        if (delta * delta <= settings.epsilon && (hi - lo) <= kAlphaBracketTol) {
          tol_met = true;
          break;
        }
        if ((hi - lo) <= kAlphaBracketTol * 1e-3) {
          tol_met = true;
          break;
        }
      }
      converged = tol_met;
      candidates.push_back(alpha);
      candidates.push_back(0.5 * (lo + hi));
    }
  }

  // Pick the best candidate, preferring larger alpha on exact ties.
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  double best_alpha = candidates.front();
  double best_rate = rate_at(best_alpha);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double r = rate_at(candidates[i]);
    if (r > best_rate) {
      best_rate = r;
      best_alpha = candidates[i];
    }
  }
  return finish_solution(cfg, est, constellation, best_alpha, iterations, converged,
                         AacAlgorithm::RateMax);
}

AacSolution solve_trigger_criterion(const ReceiverConfig& cfg,
                                    const ChannelEstimate& est,
                                    const Constellation& constellation,
                                    const SolverSettings& settings) {
  settings.validate();
  check_channel(est);
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  const double target = settings.trigger_target;
  const auto h = [&](double a) { return average_trigger_at(em, a) - target; };
  const auto h_prime = [&](double a) {
    KahanSum acc;
    for (int m = 0; m < em.order(); ++m) {
      const std::size_t mi = static_cast<std::size_t>(m);
      acc.add(em.slope[mi] * std::exp(-em.exponent(m, a)));
    }
    return acc.value() / em.order();
  };

  // Interior roots are driven below the residual tolerance even when the
  // configured epsilon is looser; the squared-criterion rule alone would
  // allow |h| up to sqrt(epsilon).
  const double stop_sq = std::min(settings.epsilon, kTriggerResidualTol * kTriggerResidualTol);

  const double h1 = h(1.0);
  if (h1 <= 0.0) {
    // Even unattenuated light cannot reach the target; the feasible minimizer
    // of |h| is the boundary.
    return finish_solution(cfg, est, constellation, 1.0, 0, true,
                           AacAlgorithm::TriggerCriterion);
  }
  const double hf = h(settings.alpha_floor);
  if (hf >= 0.0) {
    return finish_solution(cfg, est, constellation, settings.alpha_floor, 0, false,
                           AacAlgorithm::TriggerCriterion);
  }

  double lo = settings.alpha_floor, hi = 1.0;
  double alpha = 1.0;
  double h_cur = h1;
  int iterations = 0;
  bool converged = false;
  while (iterations < settings.t_max) {
    ++iterations;
    const double slope = h_prime(alpha);
    double next = slope > 0.0 ? alpha - h_cur / slope
                              : std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    alpha = next;
    h_cur = h(alpha);
    if (h_cur > 0.0) hi = alpha; else lo = alpha;
    if (h_cur * h_cur <= stop_sq) {
      converged = true;
      break;
    }
  }
  return finish_solution(cfg, est, constellation, alpha, iterations, converged,
                         AacAlgorithm::TriggerCriterion);
}

double attenuation_from_targets(const ChannelEstimate& est,
                                double target_signal_rate,
                                double target_background_rate) {
  check_channel(est);
  if (!(target_signal_rate >= 0.0) || !(target_background_rate >= 0.0))
    throw DomainError("target rates must be >= 0");
  const double incident = est.signal_rate_cpns + est.background_rate_cpns;
  const double target = target_signal_rate + target_background_rate;
  if (target > incident)
    throw InfeasibleAmplificationError(
        "target rates exceed incident rates; an attenuator cannot amplify");
  return target / incident;
}

AacSolution evaluate_fixed_attenuation(const ReceiverConfig& cfg,
                                       const ChannelEstimate& est,
                                       const Constellation& constellation,
                                       double alpha) {
  check_attenuation(alpha);
  return finish_solution(cfg, est, constellation, alpha, 0, true, AacAlgorithm::None);
}

}  // namespace spadaac
