// Receiver and channel parameter types for a time-gated SPAD-array
// photon-counting front end. Units are nanoseconds and counts/ns throughout.
#pragma once

#include <cstdint>
#include <vector>

#include "spadaac/errors.hpp"

namespace spadaac {

/// Static detector-array and gating parameters.
struct ReceiverConfig {
  double pde = 0.2;                 // photon detection efficiency, (0, 1]
  int array_size = 1;               // number of SPAD pixels
  double symbol_duration_ns = 1000.0;
  double dead_time_ns = 9.0;
  double gate_duration_ns = 1.0;
  double dark_rate_cpns = 0.01;     // dark carrier rate, counts/ns
  // When true (the analytic model), attenuation scales the dark-count term of
  // the per-gate exponent along with the optical terms. When false, only the
  // optical part is attenuated, which is what a physical attenuator does.
  bool attenuate_dark_counts = true;

  void validate() const;
};

/// Estimated incident photon rates fed to the attenuation controller.
struct ChannelEstimate {
  double signal_rate_cpns = 0.0;      // peak signal photon rate
  double background_rate_cpns = 0.0;  // background photon rate

  void validate() const;
  /// Signal-to-background ratio; requires background > 0.
  double sbr() const;
};

/// Ordered M-PAM photon-rate levels with an implicit uniform prior.
struct Constellation {
  std::vector<double> levels_cpns;

  int order() const { return static_cast<int>(levels_cpns.size()); }
  /// Throws DegenerateConstellationError unless levels are non-negative and
  /// strictly increasing with at least two entries.
  void validate() const;
};

/// Gate slots available to one pixel during a symbol: ceil(T_s / (t_d + t_g)).
int gates_per_pixel(const ReceiverConfig& cfg);

/// Maximum photon count per symbol: array_size * gates_per_pixel.
int k_max(const ReceiverConfig& cfg);

/// Square-root-spaced PAM levels: level_i = peak * ((i-1)/(order-1))^2.
/// For order 4 this is {0, peak/9, 4*peak/9, peak}. A zero peak yields a
/// degenerate (all-zero) constellation that downstream validation rejects.
Constellation square_root_constellation(double peak, int order);

/// Per-symbol decomposition of the per-gate exponent into x_m(alpha) =
/// alpha * slope[m] + offset. With dark-count attenuation enabled the offset
/// is zero and slope[m] is the full pre-attenuation exponent.
struct ExponentModel {
  std::vector<double> slope;
  double offset = 0.0;

  double exponent(int m, double alpha) const {
    return alpha * slope[static_cast<std::size_t>(m)] + offset;
  }
  /// Pre-attenuation total exponent [pde*(level_m + background) + dark] * t_g.
  double total(int m) const { return slope[static_cast<std::size_t>(m)] + offset; }
  int order() const { return static_cast<int>(slope.size()); }
};

ExponentModel make_exponent_model(const ReceiverConfig& cfg,
                                  const ChannelEstimate& est,
                                  const Constellation& constellation);

/// Checks alpha is in (0, 1]; throws DomainError otherwise.
void check_attenuation(double alpha);

}  // namespace spadaac
