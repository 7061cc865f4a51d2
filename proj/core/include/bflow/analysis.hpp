#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "bflow/observables.hpp"

namespace bflow {

struct ChiOptions {
  double floor = 1e-12;  // |b| below this excludes the point
  double t_min = -std::numeric_limits<double>::infinity();  // exclusive
  double t_max = std::numeric_limits<double>::infinity();   // inclusive
};

struct ChiResult {
  double value = 0.0;
  std::size_t compared = 0;
  std::size_t excluded = 0;  // points dropped by the floor
};

/// chi(a, b) = sqrt(mean_i (1 - a(t_i) / b(t_i))^2) over b's samples in the
/// window; a is linearly interpolated onto b's times when the grids differ.
/// Asymmetric by design. Throws ArgumentError when no point is comparable.
ChiResult chi_indicator(const ObservableSeries& a, const ObservableSeries& b,
                        const ChiOptions& options = {});

/// Linear interpolation of the series at t; throws DomainError outside its span.
double interpolate(const ObservableSeries& series, double t);

struct Crossing {
  double time = std::numeric_limits<double>::quiet_NaN();
  bool valid = false;
};

/// First upward crossing of `threshold`, linearly interpolated between the
/// bracketing samples. Invalid when the series starts at or above the
/// threshold or never reaches it.
Crossing first_crossing(const ObservableSeries& series, double threshold);

/// sigma^2(t_b) = 1.
Crossing extract_tb(const ObservableSeries& sigma2);
/// eps_k(t_e) = v0.
Crossing extract_te(const ObservableSeries& kinetic_energy, double v0);

enum class Method { classical_sim, quantum_sim, white_noise };

std::string_view to_string(Method method) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;

struct TimeScales {
  Method method = Method::classical_sim;
  double tau = 0.0;
  double v0 = 0.0;
  Crossing tb;
  Crossing te;

  double vtilde() const noexcept { return v0 * tau * tau; }
  double tb_over_tau() const noexcept { return tb.time / tau; }
  double te_over_tau() const noexcept { return te.time / tau; }
  bool valid() const noexcept { return tb.valid && te.valid; }
};

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double rms_residual = 0.0;  // in log space
};

/// Least-squares line through (log x, log y). Throws ArgumentError for fewer
/// than three points, nonpositive values, or all-equal x.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

/// Times divided by `time_unit`, values and errors divided by `value_unit`.
ObservableSeries rescaled(const ObservableSeries& series, double time_unit, double value_unit);

}  // namespace bflow
