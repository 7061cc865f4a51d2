#include "bflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bflow/errors.hpp"

namespace bflow {

CorrelationSpec::CorrelationSpec(double v0, double tau, Envelope envelope)
    : v0_(v0), tau_(tau), vtilde_(v0 * tau * tau), envelope_(envelope) {
  if (!std::isfinite(v0) || v0 < 0.0)
    throw ArgumentError("CorrelationSpec: v0 must be finite and >= 0, got " + std::to_string(v0));
  if (!std::isfinite(tau) || tau <= 0.0)
    throw ArgumentError("CorrelationSpec: tau must be finite and > 0, got " + std::to_string(tau));
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

void validate_extents(const SimulationGrid& grid) {
  if (!(grid.length > 0.0) || !(grid.duration > 0.0) || !std::isfinite(grid.length) ||
      !std::isfinite(grid.duration))
    throw ArgumentError("SimulationGrid: length and duration must be positive");
  if (!is_power_of_two(grid.nx) || !is_power_of_two(grid.nt) || grid.nx < 2 || grid.nt < 2)
    throw ArgumentError("SimulationGrid: N and M must be powers of two >= 2 (got N=" +
                        std::to_string(grid.nx) + ", M=" + std::to_string(grid.nt) + ")");
}

}  // namespace

void validate_for_synthesis(const SimulationGrid& grid, const CorrelationSpec& spec) {
  validate_extents(grid);
  if (grid.dx() > kMaxSynthesisDx * (1.0 + 1e-12))
    throw ResolutionError("grid too coarse: dx = " + std::to_string(grid.dx()) +
                          " exceeds 1/4 correlation length");
  if (grid.dt() > kMaxSynthesisDtOverTau * spec.tau() * (1.0 + 1e-12))
    throw ResolutionError("grid too coarse: dt = " + std::to_string(grid.dt()) +
                          " exceeds tau/4 = " + std::to_string(spec.tau() / 4.0));
}

void validate_for_propagation(const SimulationGrid& grid, double dt, double max_ratio) {
  validate_extents(grid);
  if (grid.dx() > kMaxPropagationDx * (1.0 + 1e-12))
    throw ResolutionError("propagation grid: dx = " + std::to_string(grid.dx()) +
                          " exceeds 1/40");
  const double ratio = dt / (grid.dx() * grid.dx());
  if (ratio > max_ratio * (1.0 + 1e-12))
    throw ResolutionError("propagation grid: dt/dx^2 = " + std::to_string(ratio) +
                          " exceeds " + std::to_string(max_ratio));
}

SimulationGrid make_dynamics_grid(double length, std::size_t nx, double t_end, double tau,
                                  double samples_per_tau) {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw ArgumentError("make_dynamics_grid: t_end must be positive and finite");
  if (!(samples_per_tau > 0.0) || !(tau > 0.0) || !std::isfinite(tau))
    throw ArgumentError("make_dynamics_grid: samples_per_tau and tau must be positive");
  const double duration = t_end + kTemporalPaddingTaus * tau;
  const double needed = std::ceil(duration * samples_per_tau / tau - 1e-9);
  if (needed > double(1u << 26)) throw ArgumentError("make_dynamics_grid: time grid too large");
  return {length, duration, nx,
          next_power_of_two(std::max<std::size_t>(4, static_cast<std::size_t>(needed)))};
}

TimeStepping dynamics_stepping(const SimulationGrid& grid, double tau, double t_end,
                               double dt_ratio, double steps_per_tau) {
  if (!std::isfinite(t_end) || t_end < 0.0 || t_end > grid.duration * (1.0 + 1e-12))
    throw DomainError("t_end = " + std::to_string(t_end) + " outside [0, T = " +
                      std::to_string(grid.duration) + "]");
  if (!(dt_ratio > 0.0) || !(steps_per_tau > 0.0) || !(tau > 0.0))
    throw ArgumentError("dynamics_stepping: dt_ratio, steps_per_tau and tau must be positive");
  if (t_end == 0.0) return {0, 0.0};
  const double dx = grid.dx();
  const double dt_max = std::min(dt_ratio * dx * dx, tau / steps_per_tau);
  const double steps = std::ceil(t_end / dt_max - 1e-9);
  if (steps > 1e9) throw ArgumentError("dynamics_stepping: too many steps");
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(steps));
  return {n, t_end / static_cast<double>(n)};
}

}  // namespace bflow
