#pragma once

#include <cstddef>

namespace bflow {

enum class Envelope { gaussian };

/// Statistical parameters of the fluctuating potential in quantum units:
/// amplitude v0, correlation time tau, and the classical combination
/// vtilde = v0 * tau^2. The spatial correlation length is the unit of length.
class CorrelationSpec {
 public:
  CorrelationSpec(double v0, double tau, Envelope envelope = Envelope::gaussian);

  double v0() const noexcept { return v0_; }
  double tau() const noexcept { return tau_; }
  double vtilde() const noexcept { return vtilde_; }
  Envelope envelope() const noexcept { return envelope_; }

 private:
  double v0_;
  double tau_;
  double vtilde_;
  Envelope envelope_;
};

/// Periodic space-time sampling grid: N points over [0, L), M points over [0, T).
struct SimulationGrid {
  double length = 100.0;
  double duration = 1.0;
  std::size_t nx = 4096;
  std::size_t nt = 1024;

  double dx() const noexcept { return length / static_cast<double>(nx); }
  double dt() const noexcept { return duration / static_cast<double>(nt); }
};

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

// Largest spacings that still resolve the Gaussian envelope.
inline constexpr double kMaxSynthesisDx = 0.25;
inline constexpr double kMaxSynthesisDtOverTau = 0.25;

// Propagation limits: >= 40 samples per correlation length, dt <= dx^2.
inline constexpr double kMaxPropagationDx = 1.0 / 40.0;
inline constexpr double kMaxStabilityRatio = 1.0;

/// Throws ArgumentError for non-power-of-two or non-positive extents and
/// ResolutionError when dx > 1/4 or dt > tau/4.
void validate_for_synthesis(const SimulationGrid& grid, const CorrelationSpec& spec);

/// Throws ResolutionError when dx > 1/40 or dt / dx^2 exceeds `max_ratio`.
void validate_for_propagation(const SimulationGrid& grid, double dt,
                              double max_ratio = kMaxStabilityRatio);

// The potential is periodic in t; its period exceeds the run window by this
// many correlation times so wrapped correlations stay below exp(-18).
inline constexpr double kTemporalPaddingTaus = 6.0;

/// Potential grid for a run over [0, t_end]: duration t_end + 6 tau, and the
/// smallest power-of-two M with dt <= tau / samples_per_tau.
SimulationGrid make_dynamics_grid(double length, std::size_t nx, double t_end, double tau,
                                  double samples_per_tau = 16.0);

/// Uniform integration step for [0, t_end]: the largest t_end / n with
/// dt <= dt_ratio * dx^2 and dt <= tau / steps_per_tau.
struct TimeStepping {
  std::size_t steps = 0;
  double dt = 0.0;
};
TimeStepping dynamics_stepping(const SimulationGrid& grid, double tau, double t_end,
                               double dt_ratio = 1.0, double steps_per_tau = 8.0);

}  // namespace bflow
