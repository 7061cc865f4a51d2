#include "bflow/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "bflow/errors.hpp"
#include "bflow/parallel.hpp"
#include "schedule.hpp"

namespace bflow {

namespace {

WaveState blank_state(const SimulationGrid& grid) {
  if (grid.nx == 0 || !(grid.length > 0.0))
    throw ArgumentError("wave state needs a non-empty grid with positive length");
  WaveState s;
  s.length = grid.length;
  s.amplitudes.assign(grid.nx, {0.0, 0.0});
  return s;
}

void normalize(WaveState& s) {
  const double scale = 1.0 / std::sqrt(s.norm());
  for (auto& a : s.amplitudes) a *= scale;
}

}  // namespace

double WaveState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return sum * dx();
}

WaveState init_gaussian(const SimulationGrid& grid) {
  if (grid.length < 20.0)
    throw DomainError("init_gaussian: L = " + std::to_string(grid.length) +
                      " is too small for a unit-width packet (need L >= 20)");
  WaveState s = blank_state(grid);
  const double dx = grid.dx();
  const double centre = 0.5 * grid.length;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double u = static_cast<double>(i) * dx - centre;
    s.amplitudes[i] = std::exp(-0.5 * u * u);
  }
  normalize(s);
  return s;
}

WaveState init_plane_wave(const SimulationGrid& grid) {
  WaveState s = blank_state(grid);
  std::fill(s.amplitudes.begin(), s.amplitudes.end(), 1.0 / std::sqrt(grid.length));
  return s;
}

KineticEnergyProbe::KineticEnergyProbe(std::size_t nx) : fft_(nx, fft::Direction::forward) {}

double KineticEnergyProbe::operator()(const WaveState& state) {
  const std::size_t n = state.size();
  if (n != fft_.size()) throw ArgumentError("kinetic_energy: state size does not match probe");
  auto data = fft_.data();
  std::copy(state.amplitudes.begin(), state.amplitudes.end(), data.begin());
  fft_.execute();
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = fft::angular_frequency(i, n, state.length);
    const double p = std::norm(data[i]);
    weighted += 0.5 * k * k * p;
    total += p;
  }
  return total > 0.0 ? weighted / total : 0.0;
}

double kinetic_energy(const WaveState& state) {
  KineticEnergyProbe probe(state.size());
  return probe(state);
}

double displacement2(const WaveState& state) {
  const double dx = state.dx();
  const double centre = 0.5 * state.length;
  double sum = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double u = static_cast<double>(i) * dx - centre;
    sum += std::norm(state.amplitudes[i]) * u * u;
  }
  return sum * dx;
}

double boundary_amplitude(const WaveState& state) {
  const std::size_t n = state.size();
  const auto band = std::min<std::size_t>(
      n / 2, static_cast<std::size_t>(std::ceil(1.0 / state.dx())));
  double peak = 0.0;
  for (std::size_t i = 0; i <= band && i < n; ++i) {
    peak = std::max(peak, std::abs(state.amplitudes[i]));
    peak = std::max(peak, std::abs(state.amplitudes[n - 1 - i]));
  }
  return peak;
}

void ScintillationAccumulator::add(const WaveState& state) {
  for (const auto& a : state.amplitudes) {
    const double intensity = std::norm(a);
    sum_i_ += intensity;
    sum_i2_ += intensity * intensity;
  }
  points_ += state.size();
}

double ScintillationAccumulator::value() const {
  if (points_ == 0) throw ArgumentError("scintillation: no states accumulated");
  const double n = static_cast<double>(points_);
  const double mean = sum_i_ / n;
  if (!(mean > 0.0)) throw ArgumentError("scintillation: zero mean intensity");
  return (sum_i2_ / n) / (mean * mean) - 1.0;
}

double scintillation(std::span<const WaveState> states) {
  ScintillationAccumulator acc;
  for (const auto& s : states) acc.add(s);
  return acc.value();
}

struct SplitStepPropagator::Impl {
  SimulationGrid grid;
  std::optional<SliceWindow> window;
  double v0 = 0.0;
  fft::ComplexFft forward;
  fft::ComplexFft backward;
  std::vector<double> k2;
  std::vector<std::complex<double>> kinetic;  // exp(-i k^2 dt/2) / N for cached_dt
  double cached_dt = 0.0;
  std::vector<std::complex<double>> phase;

  explicit Impl(const SimulationGrid& g)
      : grid(g), forward(g.nx, fft::Direction::forward), backward(g.nx, fft::Direction::backward) {
    k2.resize(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double k = fft::angular_frequency(i, g.nx, g.length);
      k2[i] = k * k;
    }
    phase.resize(g.nx);
  }

  void prepare_kinetic(double dt) {
    if (dt == cached_dt) return;
    kinetic.resize(grid.nx);
    const double inv_n = 1.0 / static_cast<double>(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i) kinetic[i] = std::polar(inv_n, -0.5 * k2[i] * dt);
    cached_dt = dt;
  }

  // Potential half-step phases at the interval midpoint.
  void prepare_potential(double t_mid, double dt) {
    const auto b = window->at(t_mid);
    const double scale = -v0 * 0.5 * dt;
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double xi = (1.0 - b.weight) * b.lower[i] + b.weight * b.upper[i];
      phase[i] = std::polar(1.0, scale * xi);
    }
  }
};

SplitStepPropagator::SplitStepPropagator(const SimulationGrid& grid)
    : impl_(std::make_unique<Impl>(grid)) {}

SplitStepPropagator::SplitStepPropagator(const PotentialRealization& realization, double v0)
    : impl_(std::make_unique<Impl>(realization.grid())) {
  if (!std::isfinite(v0)) throw ArgumentError("SplitStepPropagator: v0 must be finite");
  impl_->v0 = v0;
  if (v0 != 0.0) impl_->window.emplace(realization, SliceField::value);
}

SplitStepPropagator::~SplitStepPropagator() = default;
SplitStepPropagator::SplitStepPropagator(SplitStepPropagator&&) noexcept = default;
SplitStepPropagator& SplitStepPropagator::operator=(SplitStepPropagator&&) noexcept = default;

void SplitStepPropagator::step(WaveState& state, double dt, double t_limit) {
  Impl& im = *impl_;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("split_step: dt must be positive");
  if (state.size() != im.grid.nx || state.length != im.grid.length)
    throw ArgumentError("split_step: state does not match the propagator grid");
  const double t_next = state.time + dt;
  if (t_next > t_limit * (1.0 + 1e-12) + 1e-300)
    throw DomainError("split_step: time " + std::to_string(t_next) + " exceeds limit " +
                      std::to_string(t_limit));

  const bool with_potential = im.window.has_value();
  if (with_potential) im.prepare_potential(state.time + 0.5 * dt, dt);
  im.prepare_kinetic(dt);

  auto fwd = im.forward.data();
  const std::size_t n = im.grid.nx;
  if (with_potential) {
    for (std::size_t i = 0; i < n; ++i) fwd[i] = state.amplitudes[i] * im.phase[i];
  } else {
    std::copy(state.amplitudes.begin(), state.amplitudes.end(), fwd.begin());
  }
  im.forward.execute();
  auto bwd = im.backward.data();
  for (std::size_t i = 0; i < n; ++i) bwd[i] = fwd[i] * im.kinetic[i];
  im.backward.execute();
  if (with_potential) {
    for (std::size_t i = 0; i < n; ++i) state.amplitudes[i] = bwd[i] * im.phase[i];
  } else {
    std::copy(bwd.begin(), bwd.end(), state.amplitudes.begin());
  }
  state.time = t_next;
}

namespace {

struct RealizationTrace {
  std::vector<double> ek;
  std::vector<double> sum_i;
  std::vector<double> sum_i2;
  std::vector<double> sigma2;
  std::size_t sigma2_valid = 0;  // leading samples recorded before the edge was reached
  double drift = 0.0;
  std::optional<AmplitudeRaster> raster;
};

void check_norm(const WaveState& s, double tolerance, double& drift) {
  const double norm = s.norm();
  const double d = std::abs(norm - 1.0);
  drift = std::max(drift, d);
  if (!(d <= tolerance))
    throw NumericalInstability("norm drifted to " + format_number(norm) + " at t = " +
                               format_number(s.time));
}

}  // namespace

QuantumObservables propagate_and_observe(const CorrelationSpec& spec, const SimulationGrid& grid,
                                         const QuantumOptions& options, double t_end) {
  if (options.realizations == 0) throw ArgumentError("propagate_and_observe: no realizations");
  if (!options.plane_wave && !options.gaussian)
    throw ArgumentError("propagate_and_observe: no initial state requested");
  const TimeStepping stepping =
      dynamics_stepping(grid, spec.tau(), t_end, options.dt_ratio, options.steps_per_tau);
  const std::size_t steps = stepping.steps;
  const auto schedule = detail::record_steps(steps, options.record_stride);
  const double dt = stepping.dt;
  const std::size_t max_side = std::max<std::size_t>(options.raster_max_side, 1);
  const std::size_t raster_x_stride = (grid.nx + max_side - 1) / max_side;
  const std::size_t raster_t_stride = (steps + 1 + max_side - 1) / max_side;

  std::vector<RealizationTrace> traces(options.realizations);
  parallel_for(options.realizations, options.threads, [&](std::size_t r) {
    RealizationTrace& trace = traces[r];
    const std::uint64_t index = options.first_index + r;
    std::optional<PotentialRealization> realization;
    if (spec.v0() != 0.0)
      realization = PotentialRealization::sample(spec, grid, options.master_seed, index);
    auto make_propagator = [&] {
      return realization ? SplitStepPropagator(*realization, spec.v0()) : SplitStepPropagator(grid);
    };
    KineticEnergyProbe probe(grid.nx);

    if (options.plane_wave) {
      const bool raster = options.raster && r == 0;
      if (raster) {
        AmplitudeRaster ar;
        ar.nx = (grid.nx + raster_x_stride - 1) / raster_x_stride;
        ar.dx = grid.dx() * static_cast<double>(raster_x_stride);
        ar.dt = dt * static_cast<double>(raster_t_stride);
        ar.tau = spec.tau();
        ar.v0 = spec.v0();
        ar.seed = options.master_seed;
        ar.index = index;
        trace.raster = std::move(ar);
      }
      auto grab_raster = [&](const WaveState& s, std::size_t step) {
        if (!raster || step % raster_t_stride != 0) return;
        for (std::size_t i = 0; i < grid.nx; i += raster_x_stride)
          trace.raster->values.push_back(std::abs(s.amplitudes[i]));
        ++trace.raster->nt;
      };
      SplitStepPropagator prop = make_propagator();
      WaveState s = init_plane_wave(grid);
      std::size_t step = 0;
      grab_raster(s, 0);
      for (std::size_t target : schedule) {
        while (step < target) {
          prop.step(s, dt, t_end);
          ++step;
          s.time = static_cast<double>(step) * dt;
          check_norm(s, options.norm_tolerance, trace.drift);
          grab_raster(s, step);
        }
        trace.ek.push_back(probe(s));
        double si = 0.0, si2 = 0.0;
        for (const auto& a : s.amplitudes) {
          const double in = std::norm(a);
          si += in;
          si2 += in * in;
        }
        trace.sum_i.push_back(si);
        trace.sum_i2.push_back(si2);
      }
    }

    if (options.gaussian) {
      SplitStepPropagator prop = make_propagator();
      WaveState s = init_gaussian(grid);
      std::size_t step = 0;
      bool valid = true;
      for (std::size_t target : schedule) {
        while (step < target) {
          prop.step(s, dt, t_end);
          ++step;
          s.time = static_cast<double>(step) * dt;
          check_norm(s, options.norm_tolerance, trace.drift);
        }
        if (valid && boundary_amplitude(s) > kBoundaryAmplitudeLimit) valid = false;
        if (!valid) break;
        trace.sigma2.push_back(displacement2(s));
        ++trace.sigma2_valid;
      }
    }
  });

  std::vector<double> times;
  times.reserve(schedule.size());
  for (std::size_t s : schedule) times.push_back(static_cast<double>(s) * dt);

  Provenance meta = detail::grid_metadata(spec, grid);
  meta.set("method", "quantum_sim");
  meta.set("dt", dt);
  meta.set("seed.master", std::to_string(options.master_seed));
  meta.set("seed.first_index", std::to_string(options.first_index));
  meta.set("ensemble.realizations", static_cast<double>(options.realizations));

  QuantumObservables out;
  for (const auto& t : traces) out.max_norm_drift = std::max(out.max_norm_drift, t.drift);

  if (options.plane_wave) {
    std::vector<std::vector<double>> ek_rows, s_rows;
    for (auto& t : traces) {
      ek_rows.push_back(std::move(t.ek));
      std::vector<double> s_row(times.size());
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double n = static_cast<double>(grid.nx);
        const double mean = t.sum_i[i] / n;
        s_row[i] = (t.sum_i2[i] / n) / (mean * mean) - 1.0;
      }
      s_rows.push_back(std::move(s_row));
    }
    out.kinetic_energy = reduce_realizations(ObservableKind::kinetic_energy, times, ek_rows);
    out.kinetic_energy->metadata = meta;
    out.kinetic_energy->metadata.set("kind", "kinetic_energy");
    out.kinetic_energy->metadata.set("init", "plane_wave");

    // Pooled space+ensemble statistic; stderr from the per-realization spread.
    ObservableSeries sc = reduce_realizations(ObservableKind::scintillation, times, s_rows);
    for (std::size_t i = 0; i < times.size(); ++i) {
      double si = 0.0, si2 = 0.0;
      for (const auto& t : traces) {
        si += t.sum_i[i];
        si2 += t.sum_i2[i];
      }
      const double n = static_cast<double>(grid.nx * traces.size());
      const double mean = si / n;
      sc.values[i] = (si2 / n) / (mean * mean) - 1.0;
    }
    sc.metadata = meta;
    sc.metadata.set("kind", "scintillation");
    sc.metadata.set("init", "plane_wave");
    out.scintillation = std::move(sc);
    if (options.raster) out.raster = std::move(traces.front().raster);
  }

  if (options.gaussian) {
    std::size_t valid = times.size();
    for (const auto& t : traces) valid = std::min(valid, t.sigma2_valid);
    if (valid == 0)
      throw DomainError("sigma2: packet reaches the box edge before the first sample");
    std::vector<std::vector<double>> rows;
    for (auto& t : traces) rows.emplace_back(t.sigma2.begin(), t.sigma2.begin() + valid);
    std::vector<double> kept(times.begin(), times.begin() + valid);
    out.sigma2 = reduce_realizations(ObservableKind::sigma2, std::move(kept), rows);
    out.sigma2->metadata = meta;
    out.sigma2->metadata.set("kind", "sigma2");
    out.sigma2->metadata.set("init", "gaussian");
    out.sigma2->metadata.set("sigma2.valid_until", times[valid - 1]);
    out.sigma2->metadata.set("sigma2.truncated", valid < times.size() ? "1" : "0");
  }
  return out;
}

}  // namespace bflow
