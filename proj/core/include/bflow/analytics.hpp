#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "bflow/grid.hpp"
#include "bflow/observables.hpp"
#include "bflow/potential.hpp"

namespace bflow {

/// Returned for time scales that never occur (v0 = 0).
inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// Random-force model in classical units (lengths in the correlation length,
/// times in tau). gamma2 = vtilde^2 sqrt(pi/2) is derived, never set.
class AnalyticParams {
 public:
  explicit AnalyticParams(double vtilde, double ek0 = 0.0, double xdot0 = 0.0);

  double vtilde() const noexcept { return vtilde_; }
  double gamma2() const noexcept { return gamma2_; }
  double ek0() const noexcept { return ek0_; }
  double xdot0() const noexcept { return xdot0_; }

 private:
  double vtilde_;
  double gamma2_;
  double ek0_;
  double xdot0_;
};

/// integral_0^z erf(s) ds = z erf(z) + (exp(-z^2) - 1) / sqrt(pi).
double erf_integral(double z);

// Classical units. All throw DomainError for negative or non-finite t.
double ek_random_force(double t, const AnalyticParams& p);
double ek_white_noise(double t, const AnalyticParams& p);
double sigma2_white_noise(double t, const AnalyticParams& p);

// Quantum units (lengths in the correlation length, times in m lambda^2 / hbar).
double ek_random_force(double t, double v0, double tau, double ek0 = 0.0);
double ek_white_noise(double t, double v0, double tau, double ek0 = 0.0);
double sigma2_white_noise(double t, double v0, double tau, double xdot0 = 0.0);
double white_noise_slope(double v0, double tau);

/// t_b = (9/2pi)^(1/6) v0^(-2/3) tau^(-1/3); kInfiniteTime when v0 = 0.
double branching_time(double v0, double tau);
/// t_b / tau = (9/2pi)^(1/6) vtilde^(-2/3).
double branching_time_rescaled(double vtilde);
/// t_e = 1 / (sqrt(pi/2) v0 tau); kInfiniteTime when v0 = 0.
double energy_time(double v0, double tau);
/// t_e / tau = 1 / (sqrt(pi/2) vtilde).
double energy_time_rescaled(double vtilde);

/// vtilde where t_b reaches tau: (9/2pi)^(1/4).
double validity_bound();
/// vtilde where t_b = t_e: ((2pi/9)^(1/6) sqrt(2/pi))^3.
double crossing_vtilde();

/// White-noise prediction sampled at `times` (kinetic_energy or sigma2 only),
/// quantum units, with method = white_noise provenance.
ObservableSeries white_noise_series(ObservableKind kind, const CorrelationSpec& spec,
                                    std::vector<double> times, double initial = 0.0);

struct TransientOptions {
  std::size_t start_points = 128;  // evenly spaced over the slice
  std::vector<double> starts;      // explicit start positions; overrides start_points
  std::size_t panels = 64;         // Gauss-Legendre panels in w = sqrt(u)
};

struct TransientEstimate {
  double mean = std::numeric_limits<double>::quiet_NaN();  // in units of tau
  double stderr_of_mean = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;  // paths that climb back to the start height
};

/// Time to slide one correlation length downhill from rest on a frozen slice,
/// int_0^1 du / sqrt(2 vtilde (xi(x0) - xi(x0 +- u))), averaged over starts.
/// `slice` holds N values over [0, N dx), periodic. Throws ArgumentError for
/// vtilde <= 0 or an empty slice.
TransientEstimate transient_time_estimate(double vtilde, std::span<const double> slice, double dx,
                                          const TransientOptions& options = {});

/// Uses the t = 0 slice of the realization.
TransientEstimate transient_time_estimate(double vtilde, const PotentialRealization& realization,
                                          const TransientOptions& options = {});

}  // namespace bflow
