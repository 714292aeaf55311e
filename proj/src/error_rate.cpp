#include "spadaac/error_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spadaac/numerics.hpp"

namespace spadaac {

int DecisionRule::classify(double k) const {
  // upper_bound with <= semantics: an exact tie goes to the higher symbol.
  int idx = 0;
  for (double t : thresholds) {
    if (t <= k) ++idx; else break;
  }
  return idx;
}

void DecisionRule::validate(int kmax) const {
  double prev = -std::numeric_limits<double>::infinity();
  for (double t : thresholds) {
    if (!(t > prev)) throw DomainError("decision thresholds must be strictly increasing");
    if (t < 0.0 || t > static_cast<double>(kmax))
      throw DomainError("decision threshold outside [0, k_max]");
    prev = t;
  }
}

DecisionRule ml_thresholds(const CountModel& model) {
  const int M = model.order();
  if (M < 2) throw DegenerateConstellationError("need at least two symbols");
  const double K = static_cast<double>(model.k_max);
  DecisionRule rule;
  for (int m = 0; m + 1 < M; ++m) {
    const double p_lo = model.trigger_probs[static_cast<std::size_t>(m)];
    const double p_hi = model.trigger_probs[static_cast<std::size_t>(m) + 1];
    if (p_lo >= 1.0 || p_hi >= 1.0)
      throw SaturatedSymbolError("symbol " + std::to_string(p_lo >= 1.0 ? m : m + 1) +
                                 " triggers with probability 1; thresholds are degenerate");
    if (!(p_hi > p_lo))
      throw DegenerateConstellationError(
          "adjacent symbols share a trigger probability; likelihood ratio is flat");
    // Exact per-gate exponents give the log terms without cancellation:
    // ln(1 - p) = -x and ln(p) = log1mexp(x).
    const double x_lo = model.exponents[static_cast<std::size_t>(m)];
    const double x_hi = model.exponents[static_cast<std::size_t>(m) + 1];
    const double numer = K * (x_hi - x_lo);
    if (p_lo == 0.0) {
      // Limit of the crossing as the lower trigger probability vanishes: the
      // threshold tends to 0+, leaving {0} as the lower symbol's region.
      rule.thresholds.push_back(std::nextafter(0.0, 1.0));
      continue;
    }
    const double denom = (log1mexp(x_hi) - log1mexp(x_lo)) + (x_hi - x_lo);
    rule.thresholds.push_back(numer / denom);
  }
  rule.validate(model.k_max);
  return rule;
}

SerReport symbol_error_rate(const CountModel& model, const DecisionRule& rule) {
  const int M = model.order();
  if (static_cast<int>(rule.thresholds.size()) != M - 1)
    throw DomainError("decision rule size does not match constellation order");
  rule.validate(model.k_max);
  std::vector<KahanSum> correct(static_cast<std::size_t>(M));
  for (int k = 0; k <= model.k_max; ++k) {
    const int m = rule.classify(static_cast<double>(k));
    correct[static_cast<std::size_t>(m)].add(
        model.pmfs[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]);
  }
  SerReport report;
  KahanSum total;
  for (int m = 0; m < M; ++m) {
    double err = 1.0 - correct[static_cast<std::size_t>(m)].value();
    err = std::clamp(err, 0.0, 1.0);
    report.per_symbol_error.push_back(err);
    total.add(err);
  }
  report.ser = total.value() / M;
  return report;
}

}  // namespace spadaac
