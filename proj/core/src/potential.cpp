#include "bflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "bflow/errors.hpp"
#include "bflow/rng.hpp"
#include "interp.hpp"

namespace bflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Radius (in k or w*tau) at which exp(-r^2/4) drops to kModeAmplitudeCutoff.
double cutoff_radius() { return 2.0 * std::sqrt(-std::log(kModeAmplitudeCutoff)); }

// Unnormalized spectral power of the Gaussian envelope at angular frequency
// `w` for correlation scale `scale`: |F[s](w)| up to a constant.
double envelope_power(double w, double scale) { return std::exp(-0.5 * (w * scale) * (w * scale)); }

double mode_phase(std::uint64_t seed, int n, int m) {
  if (n == 0 && m == 0) return (mode_bits(seed, 0, 0) >> 63) ? std::numbers::pi : 0.0;
  const bool representative = n > 0 || (n == 0 && m > 0);
  if (representative) return kTwoPi * unit_interval(mode_bits(seed, n, m));
  return -kTwoPi * unit_interval(mode_bits(seed, -n, -m));
}

double bilinear(std::span<const double> field, const SimulationGrid& grid, double x, double t) {
  const TimeBracket tb = bracket_time(grid, t);
  const detail::SpatialBracket sb = detail::bracket_space(grid, x);
  const std::size_t n = grid.nx;
  auto at = [&](std::size_t j, std::size_t i) { return field[j * n + i]; };
  const double lower = (1.0 - sb.weight) * at(tb.lower, sb.lower) + sb.weight * at(tb.lower, sb.upper);
  if (tb.weight == 0.0) return lower;
  const double upper = (1.0 - sb.weight) * at(tb.upper, sb.lower) + sb.weight * at(tb.upper, sb.upper);
  return (1.0 - tb.weight) * lower + tb.weight * upper;
}

}  // namespace

struct PotentialRealization::State {
  State(const CorrelationSpec& s, const SimulationGrid& g) : spec(s), grid(g) {}

  CorrelationSpec spec;
  SimulationGrid grid;
  std::uint64_t master = 0;
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  bool synthesized = false;
  int n_cut = 0;
  int m_cut = 0;
  double amplitude_scale = 0.0;

  std::vector<double> values;
  std::vector<double> gradient;
  std::once_flag values_once;
  std::once_flag gradient_once;
};

std::vector<double> build_spectral_amplitudes(const CorrelationSpec& spec,
                                              const SimulationGrid& grid) {
  validate_for_synthesis(grid, spec);
  const std::size_t n = grid.nx;
  const std::size_t m = grid.nt;
  std::vector<double> px(n), pt(m);
  for (std::size_t i = 0; i < n; ++i)
    px[i] = envelope_power(fft::angular_frequency(i, n, grid.length), 1.0);
  for (std::size_t j = 0; j < m; ++j)
    pt[j] = envelope_power(fft::angular_frequency(j, m, grid.duration), spec.tau());
  double sx = 0.0, st = 0.0;
  for (double p : px) sx += p;
  for (double p : pt) st += p;
  const double norm = 1.0 / (sx * st);
  std::vector<double> amplitudes(n * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) amplitudes[j * n + i] = std::sqrt(px[i] * pt[j] * norm);
  return amplitudes;
}

PotentialRealization PotentialRealization::sample(const CorrelationSpec& spec,
                                                  const SimulationGrid& grid,
                                                  std::uint64_t master_seed, std::uint64_t index) {
  validate_for_synthesis(grid, spec);
  auto state = std::make_shared<State>(spec, grid);
  state->master = master_seed;
  state->index = index;
  state->seed = realization_seed(master_seed, index);
  state->synthesized = true;

  const double radius = cutoff_radius();
  const auto max_n = static_cast<double>(grid.nx / 2 - 1);
  const auto max_m = static_cast<double>(grid.nt / 2 - 1);
  state->n_cut = static_cast<int>(std::min(max_n, std::floor(radius * grid.length / kTwoPi)));
  state->m_cut =
      static_cast<int>(std::min(max_m, std::floor(radius * grid.duration / (kTwoPi * spec.tau()))));

  // Kept power over the rectangle of signed modes, minus the DC term.
  double sx = 0.0, st = 0.0;
  for (int n = -state->n_cut; n <= state->n_cut; ++n)
    sx += envelope_power(kTwoPi * n / grid.length, 1.0);
  for (int m = -state->m_cut; m <= state->m_cut; ++m)
    st += envelope_power(kTwoPi * m / grid.duration, spec.tau());
  const double kept = sx * st - 1.0;
  if (!(kept > 0.0))
    throw ResolutionError("domain too small: no nonconstant spectral modes");
  state->amplitude_scale = 1.0 / std::sqrt(kept);
  return PotentialRealization(std::move(state));
}

PotentialRealization PotentialRealization::from_values(const CorrelationSpec& spec,
                                                       const SimulationGrid& grid,
                                                       std::vector<double> values) {
  if (!is_power_of_two(grid.nx) || !is_power_of_two(grid.nt))
    throw ArgumentError("from_values: N and M must be powers of two");
  if (values.size() != grid.nx * grid.nt)
    throw ArgumentError("from_values: expected N*M = " + std::to_string(grid.nx * grid.nt) +
                        " values, got " + std::to_string(values.size()));
  auto state = std::make_shared<State>(spec, grid);
  state->values = std::move(values);
  std::call_once(state->values_once, [] {});
  return PotentialRealization(std::move(state));
}

const SimulationGrid& PotentialRealization::grid() const noexcept { return state_->grid; }
const CorrelationSpec& PotentialRealization::spec() const noexcept { return state_->spec; }
std::uint64_t PotentialRealization::master_seed() const noexcept { return state_->master; }
std::uint64_t PotentialRealization::index() const noexcept { return state_->index; }
bool PotentialRealization::is_synthesized() const noexcept { return state_->synthesized; }
int PotentialRealization::wavenumber_cutoff() const noexcept { return state_->n_cut; }
int PotentialRealization::frequency_cutoff() const noexcept { return state_->m_cut; }

std::complex<double> PotentialRealization::coefficient(int n, int m) const {
  const State& s = *state_;
  if (!s.synthesized) throw ArgumentError("coefficient: realization was not synthesized");
  if (std::abs(n) > s.n_cut || std::abs(m) > s.m_cut || (n == 0 && m == 0)) return {0.0, 0.0};
  const double k = kTwoPi * n / s.grid.length;
  const double w = kTwoPi * m / s.grid.duration;
  const double tau = s.spec.tau();
  const double amplitude = std::exp(-0.25 * (k * k + w * w * tau * tau)) * s.amplitude_scale;
  return std::polar(amplitude, mode_phase(s.seed, n, m));
}

std::span<const double> PotentialRealization::values() const {
  std::call_once(state_->values_once, [this] {
    const SimulationGrid& g = state_->grid;
    std::vector<double> out(g.nx * g.nt);
    SliceSynthesizer synth(*this);
    for (std::size_t j = 0; j < g.nt; ++j) synth.values(j, std::span(out).subspan(j * g.nx, g.nx));
    state_->values = std::move(out);
  });
  return state_->values;
}

std::span<const double> PotentialRealization::gradient() const {
  std::call_once(state_->gradient_once, [this] {
    const SimulationGrid& g = state_->grid;
    std::vector<double> out(g.nx * g.nt);
    SliceSynthesizer synth(*this);
    for (std::size_t j = 0; j < g.nt; ++j)
      synth.gradient(j, std::span(out).subspan(j * g.nx, g.nx));
    state_->gradient = std::move(out);
  });
  return state_->gradient;
}

std::span<const double> PotentialRealization::value_slice(std::size_t slice) const {
  if (slice >= grid().nt) throw DomainError("value_slice: slice index out of range");
  return values().subspan(slice * grid().nx, grid().nx);
}

std::span<const double> PotentialRealization::gradient_slice(std::size_t slice) const {
  if (slice >= grid().nt) throw DomainError("gradient_slice: slice index out of range");
  return gradient().subspan(slice * grid().nx, grid().nx);
}

SliceSynthesizer::SliceSynthesizer(const PotentialRealization& realization)
    : realization_(realization), c2r_(realization.grid().nx) {
  const SimulationGrid& g = realization.grid();
  if (!realization.is_synthesized()) {
    realization.values();
    r2c_ = std::make_unique<fft::RealToComplex>(g.nx);
    return;
  }
  const int n_cut = realization.wavenumber_cutoff();
  const int m_cut = realization.frequency_cutoff();
  modes_ = static_cast<std::size_t>(n_cut) + 1;
  table_.assign(g.nt * modes_, {0.0, 0.0});

  // Temporal sums D(n, t_j) = sum_m C(n, m) exp(i w_m t_j) for each kept n >= 0.
  fft::ComplexFft time_fft(g.nt, fft::Direction::backward);
  auto buf = time_fft.data();
  for (int n = 0; n <= n_cut; ++n) {
    std::fill(buf.begin(), buf.end(), fft::cplx{0.0, 0.0});
    for (int m = -m_cut; m <= m_cut; ++m) {
      const auto bin = static_cast<std::size_t>((m + static_cast<long>(g.nt)) % static_cast<long>(g.nt));
      buf[bin] = realization.coefficient(n, m);
    }
    time_fft.execute();
    for (std::size_t j = 0; j < g.nt; ++j) table_[j * modes_ + static_cast<std::size_t>(n)] = buf[j];
  }
}

void SliceSynthesizer::values(std::size_t slice, std::span<double> out) {
  const SimulationGrid& g = realization_.grid();
  if (slice >= g.nt || out.size() != g.nx) throw ArgumentError("SliceSynthesizer: bad slice request");
  if (!realization_.is_synthesized()) {
    auto row = realization_.values().subspan(slice * g.nx, g.nx);
    std::copy(row.begin(), row.end(), out.begin());
    return;
  }
  auto in = c2r_.input();
  std::fill(in.begin(), in.end(), fft::cplx{0.0, 0.0});
  const fft::cplx* row = table_.data() + slice * modes_;
  std::copy(row, row + modes_, in.begin());
  c2r_.execute();
  auto res = c2r_.output();
  std::copy(res.begin(), res.end(), out.begin());
}

void SliceSynthesizer::gradient(std::size_t slice, std::span<double> out) {
  const SimulationGrid& g = realization_.grid();
  if (slice >= g.nt || out.size() != g.nx) throw ArgumentError("SliceSynthesizer: bad slice request");
  const double dk = kTwoPi / g.length;
  auto in = c2r_.input();
  if (realization_.is_synthesized()) {
    std::fill(in.begin(), in.end(), fft::cplx{0.0, 0.0});
    const fft::cplx* row = table_.data() + slice * modes_;
    for (std::size_t n = 0; n < modes_; ++n)
      in[n] = fft::cplx{0.0, dk * static_cast<double>(n)} * row[n];
    c2r_.execute();
    auto res = c2r_.output();
    std::copy(res.begin(), res.end(), out.begin());
    return;
  }
  auto row = realization_.values().subspan(slice * g.nx, g.nx);
  auto rin = r2c_->input();
  std::copy(row.begin(), row.end(), rin.begin());
  r2c_->execute();
  auto spec = r2c_->output();
  const double inv_n = 1.0 / static_cast<double>(g.nx);
  for (std::size_t n = 0; n < spec.size(); ++n)
    in[n] = fft::cplx{0.0, dk * static_cast<double>(n) * inv_n} * spec[n];
  in[g.nx / 2] = {0.0, 0.0};  // Nyquist derivative of a real field is not representable
  c2r_.execute();
  auto res = c2r_.output();
  std::copy(res.begin(), res.end(), out.begin());
}

TimeBracket bracket_time(const SimulationGrid& grid, double t) {
  const double T = grid.duration;
  if (!std::isfinite(t) || t < -1e-12 * T || t > T * (1.0 + 1e-12))
    throw DomainError("time " + std::to_string(t) + " outside [0, " + std::to_string(T) + "]");
  const double s = std::max(t, 0.0) / grid.dt();
  double base = std::floor(s);
  double w = s - base;
  if (w > 1.0 - 1e-9) {
    base += 1.0;
    w = 0.0;
  } else if (w < 1e-9) {
    w = 0.0;
  }
  auto j = static_cast<std::size_t>(base);
  if (j >= grid.nt) {
    j = grid.nt - 1;
    w = 1.0;
  }
  return {j, (j + 1) % grid.nt, w};
}

SliceWindow::SliceWindow(const PotentialRealization& realization, SliceField field)
    : grid_(realization.grid()),
      synth_(realization),
      field_(field),
      ids_{std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max()} {
  slots_[0].resize(grid_.nx);
  slots_[1].resize(grid_.nx);
}

std::span<const double> SliceWindow::slice(std::size_t j, std::size_t keep) {
  for (std::size_t s = 0; s < 2; ++s)
    if (ids_[s] == j) return slots_[s];
  const std::size_t s = (ids_[0] == keep) ? 1 : 0;
  if (field_ == SliceField::value)
    synth_.values(j, slots_[s]);
  else
    synth_.gradient(j, slots_[s]);
  ids_[s] = j;
  return slots_[s];
}

SliceWindow::Bracket SliceWindow::at(double t) {
  const TimeBracket b = bracket_time(grid_, t);
  auto lower = slice(b.lower, b.upper);
  auto upper = slice(b.upper, b.lower);
  return {lower, upper, b.weight};
}

double evaluate_xi(const PotentialRealization& realization, double x, double t) {
  return bilinear(realization.values(), realization.grid(), x, t);
}

double force_at(const PotentialRealization& realization, const CorrelationSpec& spec, double x,
                double t) {
  if (spec.v0() == 0.0) {
    bracket_time(realization.grid(), t);
    return 0.0;
  }
  return -spec.v0() * bilinear(realization.gradient(), realization.grid(), x, t);
}

}  // namespace bflow
