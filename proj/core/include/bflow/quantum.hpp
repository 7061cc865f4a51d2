#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bflow/fft.hpp"
#include "bflow/grid.hpp"
#include "bflow/observables.hpp"
#include "bflow/potential.hpp"

namespace bflow {

/// Wave function sampled on N periodic points of [0, L).
struct WaveState {
  std::vector<std::complex<double>> amplitudes;
  double length = 0.0;
  double time = 0.0;

  std::size_t size() const noexcept { return amplitudes.size(); }
  double dx() const noexcept { return length / static_cast<double>(amplitudes.size()); }
  double norm() const;  // sum |psi|^2 dx
};

/// Amplitude allowed at the box edge before sigma^2 stops being meaningful.
inline constexpr double kBoundaryAmplitudeLimit = 1e-4;

/// psi ~ exp(-(x - L/2)^2 / 2), normalized. Throws DomainError when L < 20.
WaveState init_gaussian(const SimulationGrid& grid);

/// psi = 1/sqrt(L).
WaveState init_plane_wave(const SimulationGrid& grid);

/// Spectral <k^2/2>; reuses its FFT plan across calls.
class KineticEnergyProbe {
 public:
  explicit KineticEnergyProbe(std::size_t nx);
  double operator()(const WaveState& state);

 private:
  fft::ComplexFft fft_;
};

double kinetic_energy(const WaveState& state);

/// Second moment of |psi|^2 about L/2.
double displacement2(const WaveState& state);

/// Largest |psi| within one correlation length of the box edge.
double boundary_amplitude(const WaveState& state);

/// Space-and-ensemble intensity statistics <I^2>/<I>^2 - 1 with I = |psi|^2.
class ScintillationAccumulator {
 public:
  void add(const WaveState& state);
  double value() const;
  std::size_t count() const noexcept { return points_; }

 private:
  double sum_i_ = 0.0;
  double sum_i2_ = 0.0;
  std::size_t points_ = 0;
};

double scintillation(std::span<const WaveState> states);

/// Strang split-step propagator for i psi_t = -psi_xx / 2 + v0 xi(x, t) psi.
/// Each step applies exp(-i v0 xi(t + dt/2) dt/2) in real space around a full
/// kinetic step exp(-i k^2 dt/2) in Fourier space.
class SplitStepPropagator {
 public:
  /// Free propagation on `grid`.
  explicit SplitStepPropagator(const SimulationGrid& grid);
  SplitStepPropagator(const PotentialRealization& realization, double v0);
  ~SplitStepPropagator();
  SplitStepPropagator(SplitStepPropagator&&) noexcept;
  SplitStepPropagator& operator=(SplitStepPropagator&&) noexcept;

  /// Throws ArgumentError for dt <= 0 or a state that does not match the grid,
  /// DomainError when the step would pass `t_limit` or the potential's T.
  void step(WaveState& state, double dt,
            double t_limit = std::numeric_limits<double>::infinity());

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class InitialState { gaussian, plane_wave };

/// |psi(x, t)| of one run, subsampled to at most `max_side` points per axis.
struct AmplitudeRaster {
  std::size_t nx = 0;
  std::size_t nt = 0;
  double dx = 0.0;
  double dt = 0.0;
  double tau = 0.0;
  double v0 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> values;  // time-major
};

struct QuantumOptions {
  std::size_t realizations = 20;
  std::uint64_t master_seed = 0;
  std::uint64_t first_index = 0;
  std::size_t record_stride = 1;
  unsigned threads = 0;
  bool plane_wave = true;  // kinetic energy and scintillation
  bool gaussian = true;    // sigma^2
  bool raster = false;     // plane-wave |psi| of the first realization
  std::size_t raster_max_side = 2048;
  double norm_tolerance = 1e-8;
  double dt_ratio = 1.0;
  double steps_per_tau = 8.0;
};

struct QuantumObservables {
  std::optional<ObservableSeries> kinetic_energy;
  std::optional<ObservableSeries> sigma2;  // truncated once the packet reaches the edge
  std::optional<ObservableSeries> scintillation;
  std::optional<AmplitudeRaster> raster;
  double max_norm_drift = 0.0;
};

/// Ensemble propagation from t = 0 to t_end (see dynamics_stepping). Throws
/// NumericalInstability when |norm - 1| exceeds options.norm_tolerance.
QuantumObservables propagate_and_observe(const CorrelationSpec& spec, const SimulationGrid& grid,
                                         const QuantumOptions& options, double t_end);

}  // namespace bflow
