#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bflow/errors.hpp"
#include "bflow/grid.hpp"
#include "bflow/observables.hpp"

namespace bflow::detail {

// Steps at which observables are recorded: 0, stride, 2*stride, ..., steps.
inline std::vector<std::size_t> record_steps(std::size_t steps, std::size_t stride) {
  if (stride == 0) stride = 1;
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s <= steps; s += stride) out.push_back(s);
  if (out.back() != steps) out.push_back(steps);
  return out;
}

inline Provenance grid_metadata(const CorrelationSpec& spec, const SimulationGrid& grid) {
  Provenance p;
  p.set("tau", spec.tau());
  p.set("v0", spec.v0());
  p.set("vtilde", spec.vtilde());
  p.set("grid.L", grid.length);
  p.set("grid.N", static_cast<double>(grid.nx));
  p.set("grid.T", grid.duration);
  p.set("grid.M", static_cast<double>(grid.nt));
  p.set("grid.dx", grid.dx());
  p.set("grid.dt", grid.dt());
  return p;
}

}  // namespace bflow::detail
