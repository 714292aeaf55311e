#include "spadaac/count_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spadaac/numerics.hpp"

namespace spadaac {

namespace {

constexpr double kRowSumTolerance = 1e-12;

// Fills one binomial row (and its log) for per-gate exponent x >= 0.
// x == 0 degenerates to a point mass at zero counts. The log-domain terms are
// combined in long double: ln(k!) magnitudes reach the thousands, and plain
// double cancellation there would already cost ~1e-12 per entry.
void fill_row(int kmax, double x, const std::vector<long double>& lf,
              std::vector<double>& row, std::vector<double>& log_row) {
  const std::size_t n = static_cast<std::size_t>(kmax) + 1;
  row.assign(n, 0.0);
  log_row.assign(n, -std::numeric_limits<double>::infinity());
  if (x == 0.0) {
    row[0] = 1.0;
    log_row[0] = 0.0;
    return;
  }
  const long double lu = log1mexp_ld(x);  // ln(p_tri)
  const long double lv = -static_cast<long double>(x);
  for (int k = 0; k <= kmax; ++k) {
    long double l = log_binomial_ld(lf, kmax, k);
    if (k > 0) l += static_cast<long double>(k) * lu;
    if (k < kmax) l += static_cast<long double>(kmax - k) * lv;
    log_row[static_cast<std::size_t>(k)] = static_cast<double>(l);
    row[static_cast<std::size_t>(k)] = static_cast<double>(expl(l));
  }
  KahanSum sum;
  for (double p : row) sum.add(p);
  if (std::abs(sum.value() - 1.0) > kRowSumTolerance)
    throw Error("count PMF row failed normalization check: sum = " +
                std::to_string(sum.value()));
}

}  // namespace

CountModel CountModel::from_trigger_probs(int kmax,
                                          const std::vector<double>& trigger_probs,
                                          double attenuation) {
  CountModel model;
  model.attenuation = attenuation;
  model.k_max = kmax;
  model.trigger_probs = trigger_probs;
  const auto lf = log_factorial_table(kmax);
  for (double p : trigger_probs) {
    if (!(p >= 0.0) || p > 1.0) throw DomainError("trigger probability outside [0, 1]");
    // Recover the exponent; p == 1 maps to +inf and fill_row handles it as a
    // point mass at k_max through exp(-inf) underflow.
    const double x = p < 1.0 ? -std::log1p(-p) : std::numeric_limits<double>::infinity();
    model.exponents.push_back(x);
    model.total_exponents.push_back(x / attenuation);
    auto& row = model.pmfs.emplace_back();
    auto& log_row = model.log_pmfs.emplace_back();
    if (p >= 1.0) {
      const std::size_t n = static_cast<std::size_t>(kmax) + 1;
      row.assign(n, 0.0);
      log_row.assign(n, -std::numeric_limits<double>::infinity());
      row[static_cast<std::size_t>(kmax)] = 1.0;
      log_row[static_cast<std::size_t>(kmax)] = 0.0;
    } else {
      fill_row(kmax, x, lf, row, log_row);
    }
  }
  return model;
}

double trigger_probability(const ReceiverConfig& cfg, const ChannelEstimate& est,
                           const Constellation& constellation, int symbol,
                           double alpha) {
  check_attenuation(alpha);
  if (symbol < 0 || symbol >= constellation.order())
    throw DomainError("symbol index out of range");
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  return -std::expm1(-em.exponent(symbol, alpha));
}

double average_trigger_probability(const ReceiverConfig& cfg,
                                   const ChannelEstimate& est,
                                   const Constellation& constellation,
                                   double alpha) {
  check_attenuation(alpha);
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  KahanSum acc;
  for (int m = 0; m < em.order(); ++m) acc.add(-std::expm1(-em.exponent(m, alpha)));
  return acc.value() / em.order();
}

CountModel count_pmf(const ReceiverConfig& cfg, const ChannelEstimate& est,
                     const Constellation& constellation, double alpha) {
  check_attenuation(alpha);
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  CountModel model;
  model.attenuation = alpha;
  model.k_max = k_max(cfg);
  const auto lf = log_factorial_table(model.k_max);
  for (int m = 0; m < em.order(); ++m) {
    const double x = em.exponent(m, alpha);
    model.total_exponents.push_back(em.total(m));
    model.exponents.push_back(x);
    model.trigger_probs.push_back(-std::expm1(-x));
    auto& row = model.pmfs.emplace_back();
    auto& log_row = model.log_pmfs.emplace_back();
    fill_row(model.k_max, x, lf, row, log_row);
  }
  return model;
}

double pmf_mean(const std::vector<double>& row) {
  KahanSum acc;
  for (std::size_t k = 0; k < row.size(); ++k)
    acc.add(static_cast<double>(k) * row[k]);
  return acc.value();
}

double pmf_variance(const std::vector<double>& row, double mean) {
  KahanSum acc;
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double d = static_cast<double>(k) - mean;
    acc.add(d * d * row[k]);
  }
  return acc.value();
}

}  // namespace spadaac
