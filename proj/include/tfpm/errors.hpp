#pragma once

#include <stdexcept>
#include <string>

namespace tfpm {

/// Base class for all tfpm errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or out-of-range argument (alpha outside (0,1), p < 1, bad sizes, ...).
class InvalidParameterError : public Error {
public:
  using Error::Error;
};

/// Parameter outside the supported regime (m = 1 in monotonicity checks,
/// subcritical exponents for the elliptic profile, ...).
class UnsupportedParameterError : public Error {
public:
  using Error::Error;
};

/// Mismatched vector / mode-count dimensions.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Point outside the spatial or temporal domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Step index beyond the precomputed weight horizon.
class HorizonError : public Error {
public:
  using Error::Error;
};

/// Weight positivity or the complement identity failed.  Positivity is
/// load-bearing for the stability of the whole scheme, so this aborts runs.
class WeightIntegrityError : public Error {
public:
  using Error::Error;
};

/// A nonlinear solve failed to reach tolerance.  Carries the last residual
/// and the time-step index (-1 when not stepping).
class SolverError : public Error {
public:
  SolverError(const std::string& what, double residual, int step)
      : Error(what + " (residual " + std::to_string(residual) + ", step " +
              std::to_string(step) + ")"),
        residual_(residual),
        step_(step) {}

  double residual() const noexcept { return residual_; }
  int step() const noexcept { return step_; }

private:
  double residual_;
  int step_;
};

/// Configuration problem; carries the offending key path.
class ConfigError : public Error {
public:
  ConfigError(const std::string& key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(key) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

}  // namespace tfpm
