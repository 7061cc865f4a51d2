#pragma once

#include <cmath>
#include <cstddef>

#include "bflow/errors.hpp"
#include "bflow/grid.hpp"

namespace bflow::detail {

struct SpatialBracket {
  std::size_t lower;
  std::size_t upper;
  double weight;
};

// Periodic linear-interpolation stencil; snaps to nodes within 1e-9 cells so
// node queries reproduce stored values exactly.
inline SpatialBracket bracket_space(double length, double dx, std::size_t n, double x) {
  if (!std::isfinite(x)) throw DomainError("position is not finite");
  const double wrapped = x - length * std::floor(x / length);
  const double s = wrapped / dx;
  double base = std::floor(s);
  double w = s - base;
  if (w > 1.0 - 1e-9) {
    base += 1.0;
    w = 0.0;
  } else if (w < 1e-9) {
    w = 0.0;
  }
  const std::size_t i = static_cast<std::size_t>(base) % n;
  return {i, (i + 1) % n, w};
}

inline SpatialBracket bracket_space(const SimulationGrid& grid, double x) {
  return bracket_space(grid.length, grid.dx(), grid.nx, x);
}

}  // namespace bflow::detail
