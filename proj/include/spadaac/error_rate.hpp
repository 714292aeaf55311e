// Maximum-likelihood count thresholds between adjacent PAM symbols and the
// exact symbol error rate they induce.
#pragma once

#include <vector>

#include "spadaac/count_model.hpp"

namespace spadaac {

/// M-1 strictly increasing real thresholds; a count equal to an integer
/// threshold belongs to the higher symbol.
struct DecisionRule {
  std::vector<double> thresholds;

  /// Symbol index deciding count k: the number of thresholds <= k.
  int classify(double k) const;
  void validate(int k_max) const;
};

/// Exact SER under a decision rule, with per-symbol error probabilities.
struct SerReport {
  double ser = 0.0;
  std::vector<double> per_symbol_error;
};

/// Likelihood-crossing thresholds between adjacent symbols. Requires strictly
/// increasing trigger probabilities, all below one. A zero trigger
/// probability on the lowest symbol is handled by its analytic limit: the
/// threshold approaches zero from above, so only a zero count selects that
/// symbol.
DecisionRule ml_thresholds(const CountModel& model);

/// Error probability per symbol and overall: one minus the in-region PMF
/// mass, counting every misclassification (not only adjacent-symbol ones).
SerReport symbol_error_rate(const CountModel& model, const DecisionRule& rule);

}  // namespace spadaac
