#include "bflow/classical.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "bflow/errors.hpp"
#include "bflow/parallel.hpp"
#include "interp.hpp"
#include "schedule.hpp"

namespace bflow {

double ParticleEnsemble::kinetic_energy() const {
  if (velocities.empty()) return 0.0;
  double sum = 0.0;
  for (double v : velocities) sum += 0.5 * v * v;
  return sum / static_cast<double>(velocities.size());
}

double ParticleEnsemble::mean_square_displacement() const {
  if (displacements.empty()) return 0.0;
  double sum = 0.0;
  for (double d : displacements) sum += d * d;
  return sum / static_cast<double>(displacements.size());
}

double ParticleEnsemble::mean_velocity() const {
  if (velocities.empty()) return 0.0;
  double sum = 0.0;
  for (double v : velocities) sum += v;
  return sum / static_cast<double>(velocities.size());
}

ParticleEnsemble init_ensemble(std::ptrdiff_t n_particles, const SimulationGrid& grid,
                               InitMode mode) {
  if (n_particles <= 0)
    throw ArgumentError("init_ensemble: n_particles must be positive, got " +
                        std::to_string(n_particles));
  if (!(grid.length > 0.0)) throw ArgumentError("init_ensemble: grid length must be positive");
  const auto n = static_cast<std::size_t>(n_particles);
  ParticleEnsemble e;
  e.length = grid.length;
  e.positions.resize(n);
  switch (mode) {
    case InitMode::evenly_spaced:
      for (std::size_t j = 0; j < n; ++j)
        e.positions[j] = (static_cast<double>(j) + 0.5) * grid.length / static_cast<double>(n);
      break;
  }
  e.velocities.assign(n, 0.0);
  e.displacements.assign(n, 0.0);
  e.accelerations.assign(n, 0.0);
  return e;
}

PotentialForce::PotentialForce(const PotentialRealization& realization, double v0)
    : window_(realization, SliceField::gradient), v0_(v0) {}

void PotentialForce::accelerations(std::span<const double> positions, double t,
                                   std::span<double> out) {
  const SliceWindow::Bracket b = window_.at(t);
  const SimulationGrid& g = window_.grid();
  const double dx = g.dx();
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const auto sb = detail::bracket_space(g.length, dx, g.nx, positions[p]);
    double grad = (1.0 - sb.weight) * b.lower[sb.lower] + sb.weight * b.lower[sb.upper];
    if (b.weight != 0.0) {
      const double upper = (1.0 - sb.weight) * b.upper[sb.lower] + sb.weight * b.upper[sb.upper];
      grad = (1.0 - b.weight) * grad + b.weight * upper;
    }
    out[p] = -v0_ * grad;
  }
}

FrozenPotentialForce::FrozenPotentialForce(const PotentialRealization& realization, double v0,
                                           std::size_t slice)
    : gradient_(realization.grid().nx), dx_(realization.grid().dx()), v0_(v0) {
  SliceSynthesizer synth(realization);
  synth.gradient(slice, gradient_);
}

void FrozenPotentialForce::accelerations(std::span<const double> positions, double,
                                         std::span<double> out) {
  const auto n = gradient_.size();
  const double length = dx_ * static_cast<double>(n);
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const auto sb = detail::bracket_space(length, dx_, n, positions[p]);
    out[p] = -v0_ * ((1.0 - sb.weight) * gradient_[sb.lower] + sb.weight * gradient_[sb.upper]);
  }
}

void FunctionForce::accelerations(std::span<const double> positions, double t,
                                  std::span<double> out) {
  for (std::size_t p = 0; p < positions.size(); ++p) out[p] = f_(positions[p], t);
}

void ZeroForce::accelerations(std::span<const double>, double, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
}

void verlet_step(ParticleEnsemble& e, ForceField& force, double dt, double t_limit) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("verlet_step: dt must be positive");
  const double t_next = e.time + dt;
  if (t_next > t_limit * (1.0 + 1e-12) + 1e-300)
    throw DomainError("verlet_step: time " + std::to_string(t_next) + " exceeds limit " +
                      std::to_string(t_limit));
  const std::size_t n = e.size();
  e.accelerations.resize(n);
  if (!e.accelerations_valid) {
    force.accelerations(e.positions, e.time, e.accelerations);
    e.accelerations_valid = true;
  }
  const double half = 0.5 * dt;
  const double length = e.length;
  for (std::size_t i = 0; i < n; ++i) {
    e.velocities[i] += half * e.accelerations[i];
    const double step = dt * e.velocities[i];
    e.displacements[i] += step;
    double x = e.positions[i] + step;
    x -= length * std::floor(x / length);
    if (x >= length) x = 0.0;
    e.positions[i] = x;
  }
  e.time = t_next;
  force.accelerations(e.positions, e.time, e.accelerations);
  for (std::size_t i = 0; i < n; ++i) e.velocities[i] += half * e.accelerations[i];
}

ClassicalObservables integrate_ensemble(const CorrelationSpec& spec, const SimulationGrid& grid,
                                        const EnsembleOptions& options, double t_end) {
  if (options.realizations == 0) throw ArgumentError("integrate_ensemble: no realizations");
  if (options.particles == 0) throw ArgumentError("integrate_ensemble: no particles");
  const TimeStepping stepping =
      dynamics_stepping(grid, spec.tau(), t_end, options.dt_ratio, options.steps_per_tau);
  const std::size_t steps = stepping.steps;
  const auto schedule = detail::record_steps(steps, options.record_stride);
  const double dt = stepping.dt;

  std::vector<std::vector<double>> ek(options.realizations), s2(options.realizations);
  parallel_for(options.realizations, options.threads, [&](std::size_t r) {
    std::unique_ptr<ForceField> force;
    if (spec.v0() == 0.0) {
      force = std::make_unique<ZeroForce>();
    } else {
      const auto realization =
          PotentialRealization::sample(spec, grid, options.master_seed, options.first_index + r);
      force = std::make_unique<PotentialForce>(realization, spec.v0());
    }
    ParticleEnsemble e = init_ensemble(static_cast<std::ptrdiff_t>(options.particles), grid);
    auto& ek_row = ek[r];
    auto& s2_row = s2[r];
    ek_row.reserve(schedule.size());
    s2_row.reserve(schedule.size());
    std::size_t step = 0;
    for (std::size_t target : schedule) {
      for (; step < target; ++step) {
        verlet_step(e, *force, dt, t_end);
        // Re-anchor the clock on the grid to avoid drift in the slice lookup.
        e.time = static_cast<double>(step + 1) * dt;
      }
      ek_row.push_back(e.kinetic_energy());
      s2_row.push_back(e.mean_square_displacement());
    }
  });

  std::vector<double> times;
  times.reserve(schedule.size());
  for (std::size_t s : schedule) times.push_back(static_cast<double>(s) * dt);

  Provenance meta = detail::grid_metadata(spec, grid);
  meta.set("method", "classical_sim");
  meta.set("dt", dt);
  meta.set("seed.master", std::to_string(options.master_seed));
  meta.set("seed.first_index", std::to_string(options.first_index));
  meta.set("ensemble.realizations", static_cast<double>(options.realizations));
  meta.set("ensemble.particles", static_cast<double>(options.particles));

  ClassicalObservables out{
      reduce_realizations(ObservableKind::kinetic_energy, times, ek),
      reduce_realizations(ObservableKind::sigma2, times, s2)};
  out.kinetic_energy.metadata = meta;
  out.kinetic_energy.metadata.set("kind", "kinetic_energy");
  out.sigma2.metadata = meta;
  out.sigma2.metadata.set("kind", "sigma2");
  return out;
}

}  // namespace bflow
