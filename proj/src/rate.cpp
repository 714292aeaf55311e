#include "spadaac/rate.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "spadaac/format.hpp"
#include "spadaac/numerics.hpp"

namespace spadaac {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// exp(l0 + a*lu + b*lv) with the convention that a == 0 suppresses the lu
// term entirely (lu may be -inf when the trigger probability is zero).
double weighted_exp(double l0, int a, double lu, int b, double lv) {
  if (a > 0) {
    if (std::isinf(lu)) return 0.0;
    l0 += static_cast<double>(a) * lu;
  }
  if (b > 0) l0 += static_cast<double>(b) * lv;
  return std::exp(l0);
}

// Binomial core of one PMF entry and its attenuation derivatives, optionally
// scaled by exp(l0) (use l0 = ln C(K,k) to work with full PMF entries).
// x is the per-gate exponent at this attenuation, r = dx/dalpha.
struct CoreDerivatives {
  double f = 0.0, f1 = 0.0, f2 = 0.0;
};

CoreDerivatives core_derivatives(int kmax, int k, double x, double r, double l0) {
  const double u = -std::expm1(-x);  // trigger probability
  const double v = std::exp(-x);
  const double lu = log1mexp(x);
  const double lv = -x;
  const double K = static_cast<double>(kmax);
  CoreDerivatives out;
  out.f = weighted_exp(l0, k, lu, kmax - k, lv);
  if (k == 0) {
    const double base = weighted_exp(l0, 0, lu, kmax, lv);
    out.f1 = -r * K * base;
    out.f2 = r * r * K * K * base;
    return out;
  }
  const double bracket = K * v - static_cast<double>(kmax - k);
  out.f1 = r * weighted_exp(l0, k - 1, lu, kmax - k, lv) * bracket;
  if (k == 1) {
    out.f2 = r * r * weighted_exp(l0, 0, lu, kmax - 1, lv) *
             (K * K * u - 2.0 * K + 1.0);
  } else {
    out.f2 = r * r * weighted_exp(l0, k - 2, lu, kmax - k, lv) *
             (bracket * bracket - static_cast<double>(k) * v);
  }
  return out;
}

}  // namespace

double achievable_rate(const CountModel& model) {
  const int M = model.order();
  const std::size_t cols = static_cast<std::size_t>(model.k_max) + 1;
  KahanSum conditional;  // sum over m,k of p ln p
  for (int m = 0; m < M; ++m) {
    const auto& row = model.pmfs[static_cast<std::size_t>(m)];
    const auto& lrow = model.log_pmfs[static_cast<std::size_t>(m)];
    for (std::size_t k = 0; k < cols; ++k) {
      if (row[k] > 0.0) conditional.add(row[k] * lrow[k]);
    }
  }
  KahanSum marginal;  // sum over k of (sum_m p) ln(sum_m p)
  for (std::size_t k = 0; k < cols; ++k) {
    KahanSum col;
    for (int m = 0; m < M; ++m) col.add(model.pmfs[static_cast<std::size_t>(m)][k]);
    const double pk = col.value();
    if (pk > 0.0) marginal.add(pk * std::log(pk));
  }
  const double log2M = std::log2(static_cast<double>(M));
  double rate = log2M + (conditional.value() - marginal.value()) / (M * kLn2);
  if (rate < 0.0 && rate >= -1e-12) rate = 0.0;
  if (rate > log2M && rate <= log2M + 1e-12) rate = log2M;
  return rate;
}

DerivativeRow derivative_components(const ReceiverConfig& cfg,
                                    const ChannelEstimate& est,
                                    const Constellation& constellation,
                                    double alpha, int k) {
  check_attenuation(alpha);
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  const int kmax = k_max(cfg);
  if (k < 0 || k > kmax) throw DomainError("count index out of range");
  DerivativeRow row;
  row.k = k;
  KahanSum g, g1, g2;
  for (int m = 0; m < em.order(); ++m) {
    const auto d = core_derivatives(kmax, k, em.exponent(m, alpha), em.slope[static_cast<std::size_t>(m)], 0.0);
    row.f.push_back(d.f);
    row.f1.push_back(d.f1);
    row.f2.push_back(d.f2);
    g.add(d.f);
    g1.add(d.f1);
    g2.add(d.f2);
  }
  row.g = g.value();
  row.g1 = g1.value();
  row.g2 = g2.value();
  return row;
}

DerivativeComponents derivative_components_all(const ReceiverConfig& cfg,
                                               const ChannelEstimate& est,
                                               const Constellation& constellation,
                                               double alpha) {
  const int kmax = k_max(cfg);
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  const int M = em.order();
  DerivativeComponents all;
  all.f.assign(static_cast<std::size_t>(M), {});
  all.f1.assign(static_cast<std::size_t>(M), {});
  all.f2.assign(static_cast<std::size_t>(M), {});
  for (int k = 0; k <= kmax; ++k) {
    const DerivativeRow row = derivative_components(cfg, est, constellation, alpha, k);
    for (int m = 0; m < M; ++m) {
      all.f[static_cast<std::size_t>(m)].push_back(row.f[static_cast<std::size_t>(m)]);
      all.f1[static_cast<std::size_t>(m)].push_back(row.f1[static_cast<std::size_t>(m)]);
      all.f2[static_cast<std::size_t>(m)].push_back(row.f2[static_cast<std::size_t>(m)]);
    }
    all.g.push_back(row.g);
    all.g1.push_back(row.g1);
    all.g2.push_back(row.g2);
  }
  return all;
}

RateReport rate_report(const ReceiverConfig& cfg, const ChannelEstimate& est,
                       const Constellation& constellation, double alpha) {
  const CountModel model = count_pmf(cfg, est, constellation, alpha);
  const ExponentModel em = make_exponent_model(cfg, est, constellation);
  const int M = model.order();
  const int kmax = model.k_max;
  const auto lf = log_factorial_table(kmax);

  RateReport report;
  report.rate_bits = achievable_rate(model);

  // Work with coefficient-scaled components (actual PMF entries); the
  // binomial coefficient cancels from every ratio and from ln(f/g).
  std::vector<CoreDerivatives> d(static_cast<std::size_t>(M));
  KahanSum acc1, acc2;
  for (int k = 0; k <= kmax; ++k) {
    const double l0 = log_binomial(lf, kmax, k);
    KahanSum gs, g1s, g2s;
    for (int m = 0; m < M; ++m) {
      const std::size_t mi = static_cast<std::size_t>(m);
      d[mi] = core_derivatives(kmax, k, model.exponents[mi], em.slope[mi], l0);
      gs.add(d[mi].f);
      g1s.add(d[mi].f1);
      g2s.add(d[mi].f2);
    }
    const double g = gs.value();
    if (g <= 0.0) continue;
    const double lg = std::log(g);
    const double g1_over_g = g1s.value() / g;
    const double g2_over_g = g2s.value() / g;
    for (int m = 0; m < M; ++m) {
      const std::size_t mi = static_cast<std::size_t>(m);
      const double f = d[mi].f;
      if (f <= 0.0) continue;  // analytic limit: zero contribution
      const double lf_m = model.log_pmfs[mi][static_cast<std::size_t>(k)];
      const double log_ratio = lf_m - lg;
      const double f1 = d[mi].f1;
      const double f2 = d[mi].f2;
      acc1.add(f1 * log_ratio);
      acc2.add(f2 * (1.0 + log_ratio) + f1 * (f1 / f - 2.0 * g1_over_g) -
               f * (g2_over_g - g1_over_g * g1_over_g));
    }
  }
  const double scale = 1.0 / (M * kLn2);
  report.d1 = acc1.value() * scale;
  report.d2 = acc2.value() * scale;
  return report;
}

double rate_second_derivative(const ReceiverConfig& cfg, const ChannelEstimate& est,
                              const Constellation& constellation, double alpha) {
  return rate_report(cfg, est, constellation, alpha).d2;
}

std::vector<ConcavityPoint> concavity_scan(const ReceiverConfig& cfg,
                                           const std::vector<double>& lambda_s_grid,
                                           const std::vector<double>& lambda_b_grid,
                                           const std::vector<double>& alpha_grid,
                                           int order) {
  if (lambda_s_grid.empty() || lambda_b_grid.empty() || alpha_grid.empty())
    throw ConfigError("concavity scan: grids must be non-empty");
  std::vector<ConcavityPoint> rows;
  rows.reserve(lambda_s_grid.size() * lambda_b_grid.size() * alpha_grid.size());
  for (double lb : lambda_b_grid) {
    for (double ls : lambda_s_grid) {
      const Constellation cons = square_root_constellation(ls, order);
      const ChannelEstimate est{ls, lb};
      for (double a : alpha_grid) {
        ConcavityPoint p;
        p.lambda_s = ls;
        p.lambda_b = lb;
        p.alpha = a;
        p.d2 = rate_report(cfg, est, cons, a).d2;
        rows.push_back(p);
      }
    }
  }
  return rows;
}

void write_concavity_csv(std::ostream& os, const std::vector<ConcavityPoint>& rows) {
  os << "lambda_s,lambda_b,alpha,d2I\n";
  for (const auto& r : rows) {
    os << format_double(r.lambda_s) << ',' << format_double(r.lambda_b) << ','
       << format_double(r.alpha) << ',' << format_double(r.d2) << '\n';
  }
}

}  // namespace spadaac
