#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "bflow/grid.hpp"
#include "bflow/observables.hpp"
#include "bflow/potential.hpp"

namespace bflow {

/// Classical particles on the periodic domain. Positions are wrapped into
/// [0, L) for force lookup; displacements accumulate the unwrapped motion.
struct ParticleEnsemble {
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> displacements;
  std::vector<double> accelerations;  // valid at `time` when accelerations_valid
  bool accelerations_valid = false;
  double time = 0.0;
  double length = 0.0;

  std::size_t size() const noexcept { return positions.size(); }
  double kinetic_energy() const;            // <v^2/2>
  double mean_square_displacement() const;  // <(x(t) - x(0))^2>
  double mean_velocity() const;
};

enum class InitMode { evenly_spaced };

/// Particles at (j + 1/2) L / n at rest. Throws ArgumentError for n <= 0.
ParticleEnsemble init_ensemble(std::ptrdiff_t n_particles, const SimulationGrid& grid,
                               InitMode mode = InitMode::evenly_spaced);

/// Acceleration field a(x, t) evaluated for a batch of wrapped positions.
class ForceField {
 public:
  virtual ~ForceField() = default;
  virtual void accelerations(std::span<const double> positions, double t,
                             std::span<double> out) = 0;
};

/// -v0 d(xi)/dx of a realization, bilinear in (x, t), streamed slice by slice.
class PotentialForce final : public ForceField {
 public:
  PotentialForce(const PotentialRealization& realization, double v0);
  void accelerations(std::span<const double> positions, double t, std::span<double> out) override;

 private:
  SliceWindow window_;
  double v0_;
};

/// Same as PotentialForce with time frozen at one slice.
class FrozenPotentialForce final : public ForceField {
 public:
  FrozenPotentialForce(const PotentialRealization& realization, double v0, std::size_t slice);
  void accelerations(std::span<const double> positions, double t, std::span<double> out) override;

  std::span<const double> gradient() const noexcept { return gradient_; }
  double dx() const noexcept { return dx_; }

 private:
  std::vector<double> gradient_;
  double dx_;
  double v0_;
};

/// Pointwise analytic force, used for injected test fields.
class FunctionForce final : public ForceField {
 public:
  explicit FunctionForce(std::function<double(double x, double t)> f) : f_(std::move(f)) {}
  void accelerations(std::span<const double> positions, double t, std::span<double> out) override;

 private:
  std::function<double(double, double)> f_;
};

class ZeroForce final : public ForceField {
 public:
  void accelerations(std::span<const double> positions, double t, std::span<double> out) override;
};

/// One kick-drift-kick velocity-Verlet step of length dt. Throws
/// ArgumentError for dt <= 0 and DomainError when time + dt exceeds t_limit.
void verlet_step(ParticleEnsemble& ensemble, ForceField& force, double dt,
                 double t_limit = std::numeric_limits<double>::infinity());

struct EnsembleOptions {
  std::size_t realizations = 20;
  std::size_t particles = 1000;
  std::uint64_t master_seed = 0;
  std::uint64_t first_index = 0;
  std::size_t record_stride = 1;
  unsigned threads = 0;
  double dt_ratio = 1.0;       // dt <= dt_ratio * dx^2
  double steps_per_tau = 8.0;  // dt <= tau / steps_per_tau
};

struct ClassicalObservables {
  ObservableSeries kinetic_energy;
  ObservableSeries sigma2;
};

/// Evolves `realizations` fresh ensembles, one per potential realization
/// (indices first_index + r), from t = 0 to t_end (see dynamics_stepping), and
/// returns ensemble-averaged <v^2/2> and <(x - x0)^2>.
ClassicalObservables integrate_ensemble(const CorrelationSpec& spec, const SimulationGrid& grid,
                                        const EnsembleOptions& options, double t_end);

}  // namespace bflow
