// Achievable rate of the photon-counting channel and its first and second
// analytic derivatives with respect to the attenuation coefficient.
#pragma once

#include <iosfwd>
#include <vector>

#include "spadaac/count_model.hpp"

namespace spadaac {

/// Mutual information (bits/symbol) plus its attenuation derivatives.
struct RateReport {
  double rate_bits = 0.0;
  double d1 = 0.0;  // dI/d(alpha)
  double d2 = 0.0;  // d^2 I / d(alpha)^2
};

/// One count-row of the binomial-core derivative components: f_m is the PMF
/// without its binomial coefficient, f1/f2 its attenuation derivatives, and
/// g, g1, g2 the corresponding sums over symbols.
struct DerivativeRow {
  int k = 0;
  std::vector<double> f, f1, f2;
  double g = 0.0, g1 = 0.0, g2 = 0.0;
};

/// All rows stacked: matrices of shape order x (k_max+1).
struct DerivativeComponents {
  std::vector<std::vector<double>> f, f1, f2;  // indexed [m][k]
  std::vector<double> g, g1, g2;               // indexed [k]
};

/// Mutual information between transmitted level and detected count under a
/// uniform symbol prior, in bits. Uses the simplified entropy-difference form
/// with the 0*ln(0) = 0 convention; values within 1e-12 of 0 or log2(M) are
/// clamped to the bound.
double achievable_rate(const CountModel& model);

/// Binomial-core derivative components for count k. The closed forms for the
/// generic k contain negative powers of (e^x - 1) at k = 0 and k = 1; those
/// rows use the analytic limits of the differentiated product form instead.
DerivativeRow derivative_components(const ReceiverConfig& cfg,
                                    const ChannelEstimate& est,
                                    const Constellation& constellation,
                                    double alpha, int k);

DerivativeComponents derivative_components_all(const ReceiverConfig& cfg,
                                               const ChannelEstimate& est,
                                               const Constellation& constellation,
                                               double alpha);

/// Rate and both attenuation derivatives in one pass.
RateReport rate_report(const ReceiverConfig& cfg, const ChannelEstimate& est,
                       const Constellation& constellation, double alpha);

/// Second derivative of the rate with respect to attenuation. Symbol terms
/// whose binomial core is zero contribute their analytic limit of zero.
double rate_second_derivative(const ReceiverConfig& cfg, const ChannelEstimate& est,
                              const Constellation& constellation, double alpha);

struct ConcavityPoint {
  double lambda_s = 0.0;
  double lambda_b = 0.0;
  double alpha = 0.0;
  double d2 = 0.0;
};

/// Dense evaluation of the rate's second derivative over a
/// (background, signal, attenuation) grid with square-root constellations of
/// the given order. Rows are ordered lexicographically in
/// (lambda_b, lambda_s, alpha).
std::vector<ConcavityPoint> concavity_scan(const ReceiverConfig& cfg,
                                           const std::vector<double>& lambda_s_grid,
                                           const std::vector<double>& lambda_b_grid,
                                           const std::vector<double>& alpha_grid,
                                           int order);

/// CSV contour table: header `lambda_s,lambda_b,alpha,d2I`.
void write_concavity_csv(std::ostream& os, const std::vector<ConcavityPoint>& rows);

}  // namespace spadaac
