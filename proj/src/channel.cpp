#include "spadaac/channel.hpp"

#include <cmath>
#include <string>

namespace spadaac {

void ReceiverConfig::validate() const {
  if (!(pde > 0.0) || pde > 1.0)
    throw ConfigError("receiver: pde must be in (0, 1], got " + std::to_string(pde));
  if (array_size < 1)
    throw ConfigError("receiver: array_size must be >= 1");
  if (!(symbol_duration_ns > 0.0))
    throw ConfigError("receiver: symbol_duration_ns must be > 0");
  if (!(dead_time_ns > 0.0))
    throw ConfigError("receiver: dead_time_ns must be > 0");
  if (!(gate_duration_ns > 0.0))
    throw ConfigError("receiver: gate_duration_ns must be > 0");
  if (!(dark_rate_cpns >= 0.0))
    throw ConfigError("receiver: dark_rate_cpns must be >= 0");
}

void ChannelEstimate::validate() const {
  if (!(signal_rate_cpns >= 0.0) || !(background_rate_cpns >= 0.0))
    throw ConfigError("channel estimate: rates must be >= 0");
}

double ChannelEstimate::sbr() const {
  if (!(background_rate_cpns > 0.0))
    throw DomainError("sbr undefined: background rate is zero");
  return signal_rate_cpns / background_rate_cpns;
}

void Constellation::validate() const {
  if (order() < 2)
    throw DegenerateConstellationError("constellation needs at least 2 levels");
  double prev = -1.0;
  for (double v : levels_cpns) {
    if (!(v >= 0.0))
      throw DegenerateConstellationError("constellation levels must be >= 0");
    if (!(v > prev))
      throw DegenerateConstellationError("constellation levels must be strictly increasing");
    prev = v;
  }
}

int gates_per_pixel(const ReceiverConfig& cfg) {
  cfg.validate();
  const double period = cfg.dead_time_ns + cfg.gate_duration_ns;
  return static_cast<int>(std::ceil(cfg.symbol_duration_ns / period));
}

int k_max(const ReceiverConfig& cfg) {
  return cfg.array_size * gates_per_pixel(cfg);
}

Constellation square_root_constellation(double peak, int order) {
  if (order < 2) throw InvalidOrderError("PAM order must be >= 2");
  if (!(peak >= 0.0)) throw ConfigError("constellation peak must be >= 0");
  Constellation c;
  c.levels_cpns.reserve(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(order - 1);
    c.levels_cpns.push_back(peak * frac * frac);
  }
  return c;
}

ExponentModel make_exponent_model(const ReceiverConfig& cfg,
                                  const ChannelEstimate& est,
                                  const Constellation& constellation) {
  cfg.validate();
  est.validate();
  constellation.validate();
  const double tg = cfg.gate_duration_ns;
  const double dark = cfg.dark_rate_cpns * tg;
  ExponentModel em;
  em.slope.reserve(constellation.levels_cpns.size());
  for (double level : constellation.levels_cpns) {
    const double optical = cfg.pde * (level + est.background_rate_cpns) * tg;
    em.slope.push_back(cfg.attenuate_dark_counts ? optical + dark : optical);
  }
  em.offset = cfg.attenuate_dark_counts ? 0.0 : dark;
  return em;
}

void check_attenuation(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw DomainError("attenuation coefficient must be in (0, 1], got " +
                      std::to_string(alpha));
}

}  // namespace spadaac
