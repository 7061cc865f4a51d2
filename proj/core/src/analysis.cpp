#include "bflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bflow/errors.hpp"

namespace bflow {

namespace {

bool same_grid(const ObservableSeries& a, const ObservableSeries& b) {
  return a.times == b.times;
}

}  // namespace

double interpolate(const ObservableSeries& s, double t) {
  if (s.times.empty()) throw ArgumentError("interpolate: empty series");
  if (!(t >= s.times.front() && t <= s.times.back()))
    throw DomainError("interpolate: t = " + format_number(t) + " outside the series span");
  const auto it = std::lower_bound(s.times.begin(), s.times.end(), t);
  const auto i = static_cast<std::size_t>(it - s.times.begin());
  if (s.times[i] == t) return s.values[i];
  const double t0 = s.times[i - 1], t1 = s.times[i];
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * s.values[i - 1] + w * s.values[i];
}

ChiResult chi_indicator(const ObservableSeries& a, const ObservableSeries& b,
                        const ChiOptions& options) {
  a.validate();
  b.validate();
  const bool aligned = same_grid(a, b);
  ChiResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double t = b.times[i];
    if (!(t > options.t_min) || t > options.t_max) continue;
    if (!aligned && (a.times.empty() || t < a.times.front() || t > a.times.back())) continue;
    if (std::abs(b.values[i]) < options.floor) {
      ++r.excluded;
      continue;
    }
    const double av = aligned ? a.values[i] : interpolate(a, t);
    const double d = 1.0 - av / b.values[i];
    sum += d * d;
    ++r.compared;
  }
  if (r.compared == 0) throw ArgumentError("chi_indicator: no comparable points");
  r.value = std::sqrt(sum / static_cast<double>(r.compared));
  return r;
}

Crossing first_crossing(const ObservableSeries& s, double threshold) {
  Crossing c;
  if (s.times.empty() || !(s.values.front() < threshold)) return c;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s.values[i] >= threshold) {
      const double v0 = s.values[i - 1], v1 = s.values[i];
      const double w = (threshold - v0) / (v1 - v0);
      c.time = s.times[i - 1] + w * (s.times[i] - s.times[i - 1]);
      c.valid = true;
      return c;
    }
  }
  return c;
}

Crossing extract_tb(const ObservableSeries& sigma2) { return first_crossing(sigma2, 1.0); }

Crossing extract_te(const ObservableSeries& kinetic_energy, double v0) {
  if (!(v0 > 0.0)) return {};
  return first_crossing(kinetic_energy, v0);
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::classical_sim: return "classical_sim";
    case Method::quantum_sim: return "quantum_sim";
    case Method::white_noise: return "white_noise";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  for (Method m : {Method::classical_sim, Method::quantum_sim, Method::white_noise})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw ArgumentError("fit_power_law: need at least 3 points, got " +
                        std::to_string(points.size()));
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw ArgumentError("fit_power_law: points must be positive and finite");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("fit_power_law: x values are all equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (intercept + fit.exponent * std::log(x));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

ObservableSeries rescaled(const ObservableSeries& series, double time_unit, double value_unit) {
  if (!(time_unit > 0.0) || !(value_unit > 0.0))
    throw ArgumentError("rescaled: units must be positive");
  ObservableSeries out = series;
  for (double& t : out.times) t /= time_unit;
  for (double& v : out.values) v /= value_unit;
  for (double& e : out.stderrs) e /= value_unit;
  return out;
}

}  // namespace bflow
