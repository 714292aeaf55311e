#pragma once

#include <stdexcept>
#include <string>

namespace spadaac {

/// Base class for structured errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid receiver/constellation/solver parameters or malformed config.
struct ConfigError : Error {
  using Error::Error;
};

/// PAM order below 2.
struct InvalidOrderError : ConfigError {
  using ConfigError::ConfigError;
};

/// Constellation levels not strictly increasing (duplicate photon rates).
struct DegenerateConstellationError : ConfigError {
  using ConfigError::ConfigError;
};

/// Both signal and background rates are zero; nothing to optimize.
struct DegenerateChannelError : ConfigError {
  using ConfigError::ConfigError;
};

/// A symbol triggers with probability one; ML thresholds are undefined.
struct SaturatedSymbolError : Error {
  using Error::Error;
};

/// Requested effective rates exceed the incident rates (alpha > 1).
struct InfeasibleAmplificationError : Error {
  using Error::Error;
};

/// Argument outside its mathematical domain (e.g. attenuation not in (0,1]).
struct DomainError : Error {
  using Error::Error;
};

}  // namespace spadaac
