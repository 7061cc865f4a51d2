#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bflow/fft.hpp"
#include "bflow/grid.hpp"

namespace bflow {

/// Modes whose amplitude is below this fraction of the spectral peak are not
/// synthesized. Their combined power is below 1e-20 of the total.
inline constexpr double kModeAmplitudeCutoff = 1e-10;

/// Spectral magnitudes sqrt(|F[s](k_n)| |F[s](w_m)|) on the full FFT grid,
/// time-major (M rows of N, FFT bin order), normalized so the squares sum
/// to one. Throws ResolutionError for grids that cannot resolve the envelope.
std::vector<double> build_spectral_amplitudes(const CorrelationSpec& spec,
                                              const SimulationGrid& grid);

/// One realization of the unit-variance random field xi(x, t) on a periodic
/// grid. Synthesized realizations are defined by their Fourier coefficients
/// C(n, m) = A(k_n, w_m) exp(i phi(n, m)) with phases keyed by
/// (seed, n, m), Hermitian-symmetric so the field is exactly real; the DC
/// mode is excluded so the sample mean vanishes.
///
/// Copies share the same immutable data. Dense value and gradient grids are
/// materialized on first access (thread-safe); dynamics runs stream slices
/// through SliceSynthesizer instead.
class PotentialRealization {
 public:
  static PotentialRealization sample(const CorrelationSpec& spec, const SimulationGrid& grid,
                                     std::uint64_t master_seed, std::uint64_t index);

  /// Wraps an explicit value grid (time-major, N*M entries). Gradients come
  /// from spectral differentiation of each time slice.
  static PotentialRealization from_values(const CorrelationSpec& spec, const SimulationGrid& grid,
                                          std::vector<double> values);

  const SimulationGrid& grid() const noexcept;
  const CorrelationSpec& spec() const noexcept;
  std::uint64_t master_seed() const noexcept;
  std::uint64_t index() const noexcept;
  bool is_synthesized() const noexcept;

  /// Kept signed mode ranges |n| <= wavenumber_cutoff(), |m| <= frequency_cutoff().
  int wavenumber_cutoff() const noexcept;
  int frequency_cutoff() const noexcept;

  /// Fourier coefficient of the synthesized field at signed bins (n, m);
  /// zero outside the kept set. coefficient(-n, -m) == conj(coefficient(n, m)).
  std::complex<double> coefficient(int n, int m) const;

  std::span<const double> values() const;
  std::span<const double> gradient() const;

  std::span<const double> value_slice(std::size_t slice) const;
  std::span<const double> gradient_slice(std::size_t slice) const;

  struct State;

 private:
  explicit PotentialRealization(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

/// Produces time slices of a realization one at a time with bounded memory.
/// Slices are bit-identical to the rows of the dense grids.
class SliceSynthesizer {
 public:
  explicit SliceSynthesizer(const PotentialRealization& realization);

  void values(std::size_t slice, std::span<double> out);
  void gradient(std::size_t slice, std::span<double> out);

 private:
  PotentialRealization realization_;
  std::size_t modes_ = 0;              // kept nonnegative wavenumbers
  std::vector<fft::cplx> table_;       // M rows of `modes_` temporal sums
  fft::ComplexToReal c2r_;
  std::unique_ptr<fft::RealToComplex> r2c_;
};

enum class SliceField { value, gradient };

/// Linear-in-time access to a realization: keeps the two slices bracketing
/// the last queried time. Times are clamped into [0, T]; the slice after the
/// last wraps to slice 0 (the field is periodic in t).
class SliceWindow {
 public:
  SliceWindow(const PotentialRealization& realization, SliceField field);

  struct Bracket {
    std::span<const double> lower;
    std::span<const double> upper;
    double weight;  // field(t) = (1 - weight) * lower + weight * upper
  };

  /// Throws DomainError for t outside [0, T].
  Bracket at(double t);

  const SimulationGrid& grid() const noexcept { return grid_; }

 private:
  std::span<const double> slice(std::size_t j, std::size_t keep);

  SimulationGrid grid_;
  SliceSynthesizer synth_;
  SliceField field_;
  std::array<std::vector<double>, 2> slots_;
  std::array<std::size_t, 2> ids_;
};

struct TimeBracket {
  std::size_t lower;
  std::size_t upper;
  double weight;
};

/// Throws DomainError for t outside [0, T].
TimeBracket bracket_time(const SimulationGrid& grid, double t);

/// Bilinear interpolation of the value grid; periodic in x, clamped in t.
double evaluate_xi(const PotentialRealization& realization, double x, double t);

/// Classical force -v0 * d(xi)/dx from the bilinearly interpolated gradient grid.
double force_at(const PotentialRealization& realization, const CorrelationSpec& spec, double x,
                double t);

/// Space-time averaged correlation (1/LT) sum xi(x'+x, t'+t) xi(x', t'),
/// averaged over realizations, for lags |x| <= max_lag_x and |t| <= max_lag_t.
struct CorrelationEstimate {
  std::size_t lags_x = 0;
  std::size_t lags_t = 0;
  double dx = 0.0;
  double dt = 0.0;
  std::vector<double> values;  // (2*lags_t+1) rows of (2*lags_x+1)

  double at(std::ptrdiff_t ix, std::ptrdiff_t it) const;
};

/// Throws ArgumentError for an empty list, mismatched grids, or lags beyond
/// half the domain.
CorrelationEstimate empirical_correlation(std::span<const PotentialRealization> realizations,
                                          double max_lag_x, double max_lag_t);

}  // namespace bflow
