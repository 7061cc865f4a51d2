#pragma once

#include <stdexcept>

namespace bflow {

// Bad caller input: empty ensembles, non-positive counts, malformed points.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Query outside the simulated space-time domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Grid too coarse to resolve the correlation envelope.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalInstability : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or corrupt CSV / grid file.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bflow
