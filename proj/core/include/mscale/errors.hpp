#pragma once

#include <stdexcept>
#include <string>

namespace mscale {

/// Bad or inconsistent run configuration (unknown key, missing value, bad combination).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Dimension or shape disagreement between containers that must be congruent.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// A field was asked for a derivative it cannot provide.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Training aborted on a non-finite loss or parameter.
class RunDiverged : public std::runtime_error {
 public:
  RunDiverged(const std::string& what, long long epoch, double param_norm)
      : std::runtime_error(what), epoch(epoch), param_norm(param_norm) {}
  long long epoch;
  double param_norm;
};

}  // namespace mscale
