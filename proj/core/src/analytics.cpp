#include "bflow/analytics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "bflow/errors.hpp"
#include "interp.hpp"

namespace bflow {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtHalfPi = std::sqrt(kPi / 2.0);

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw DomainError("analytic time must be finite and nonnegative, got " + std::to_string(t));
}

void check_scales(double v0, double tau) {
  if (!std::isfinite(v0) || v0 < 0.0) throw ArgumentError("v0 must be finite and >= 0");
  if (!std::isfinite(tau) || !(tau > 0.0)) throw ArgumentError("tau must be finite and > 0");
}

}  // namespace

AnalyticParams::AnalyticParams(double vtilde, double ek0, double xdot0)
    : vtilde_(vtilde), gamma2_(vtilde * vtilde * kSqrtHalfPi), ek0_(ek0), xdot0_(xdot0) {
  if (!std::isfinite(vtilde) || vtilde < 0.0)
    throw ArgumentError("vtilde must be finite and >= 0");
  if (!std::isfinite(ek0) || !std::isfinite(xdot0))
    throw ArgumentError("initial conditions must be finite");
}

double erf_integral(double z) {
  return z * std::erf(z) + std::expm1(-z * z) / std::sqrt(kPi);
}

double ek_random_force(double t, const AnalyticParams& p) {
  check_time(t);
  return p.ek0() + p.vtilde() * p.vtilde() * std::sqrt(kPi) * erf_integral(t / std::numbers::sqrt2);
}

double ek_white_noise(double t, const AnalyticParams& p) {
  check_time(t);
  return p.ek0() + p.gamma2() * t;
}

double sigma2_white_noise(double t, const AnalyticParams& p) {
  check_time(t);
  return p.xdot0() * p.xdot0() * t * t + (2.0 / 3.0) * p.gamma2() * t * t * t;
}

double ek_random_force(double t, double v0, double tau, double ek0) {
  check_time(t);
  check_scales(v0, tau);
  return ek0 + v0 * v0 * tau * tau * std::sqrt(kPi) * erf_integral(t / (tau * std::numbers::sqrt2));
}

double white_noise_slope(double v0, double tau) {
  check_scales(v0, tau);
  return kSqrtHalfPi * v0 * v0 * tau;
}

double ek_white_noise(double t, double v0, double tau, double ek0) {
  check_time(t);
  return ek0 + white_noise_slope(v0, tau) * t;
}

double sigma2_white_noise(double t, double v0, double tau, double xdot0) {
  check_time(t);
  return xdot0 * xdot0 * t * t + (2.0 / 3.0) * white_noise_slope(v0, tau) * t * t * t;
}

double branching_time(double v0, double tau) {
  check_scales(v0, tau);
  if (v0 == 0.0) return kInfiniteTime;
  return std::pow(9.0 / (2.0 * kPi), 1.0 / 6.0) * std::pow(v0, -2.0 / 3.0) * std::cbrt(1.0 / tau);
}

double branching_time_rescaled(double vtilde) {
  if (!std::isfinite(vtilde) || vtilde < 0.0) throw ArgumentError("vtilde must be finite and >= 0");
  if (vtilde == 0.0) return kInfiniteTime;
  return std::pow(9.0 / (2.0 * kPi), 1.0 / 6.0) * std::pow(vtilde, -2.0 / 3.0);
}

double energy_time(double v0, double tau) {
  check_scales(v0, tau);
  if (v0 == 0.0) return kInfiniteTime;
  return 1.0 / (kSqrtHalfPi * v0 * tau);
}

double energy_time_rescaled(double vtilde) {
  if (!std::isfinite(vtilde) || vtilde < 0.0) throw ArgumentError("vtilde must be finite and >= 0");
  if (vtilde == 0.0) return kInfiniteTime;
  return 1.0 / (kSqrtHalfPi * vtilde);
}

double validity_bound() { return std::pow(9.0 / (2.0 * kPi), 0.25); }

double crossing_vtilde() {
  const double base = std::pow(2.0 * kPi / 9.0, 1.0 / 6.0) * std::sqrt(2.0 / kPi);
  return base * base * base;
}

ObservableSeries white_noise_series(ObservableKind kind, const CorrelationSpec& spec,
                                    std::vector<double> times, double initial) {
  ObservableSeries s;
  s.kind = kind;
  s.values.reserve(times.size());
  for (double t : times) {
    switch (kind) {
      case ObservableKind::kinetic_energy:
        s.values.push_back(ek_white_noise(t, spec.v0(), spec.tau(), initial));
        break;
      case ObservableKind::sigma2:
        s.values.push_back(sigma2_white_noise(t, spec.v0(), spec.tau(), initial));
        break;
      default:
        throw ArgumentError("white_noise_series: no white-noise form for " +
                            std::string(to_string(kind)));
    }
  }
  s.times = std::move(times);
  s.stderrs.assign(s.times.size(), 0.0);
  s.ensemble_count = 0;
  s.metadata.set("kind", std::string(to_string(kind)));
  s.metadata.set("method", "white_noise");
  s.metadata.set("tau", spec.tau());
  s.metadata.set("v0", spec.v0());
  s.metadata.set("vtilde", spec.vtilde());
  s.validate();
  return s;
}

namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes{-0.8611363115940526, -0.3399810435848563,
                                         0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGlWeights{0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};

double slice_value(std::span<const double> slice, double dx, double x) {
  const double length = dx * static_cast<double>(slice.size());
  const auto b = detail::bracket_space(length, dx, slice.size(), x);
  return (1.0 - b.weight) * slice[b.lower] + b.weight * slice[b.upper];
}

}  // namespace

TransientEstimate transient_time_estimate(double vtilde, std::span<const double> slice, double dx,
                                          const TransientOptions& options) {
  if (!std::isfinite(vtilde) || !(vtilde > 0.0))
    throw ArgumentError("transient_time_estimate: vtilde must be positive");
  if (slice.empty() || !(dx > 0.0))
    throw ArgumentError("transient_time_estimate: empty slice or bad spacing");
  const double length = dx * static_cast<double>(slice.size());
  if (length <= 1.0) throw ArgumentError("transient_time_estimate: slice shorter than one unit");
  const std::size_t panels = std::max<std::size_t>(options.panels, 1);

  std::vector<double> starts = options.starts;
  if (starts.empty()) {
    if (options.start_points == 0) throw ArgumentError("transient_time_estimate: no start points");
    for (std::size_t j = 0; j < options.start_points; ++j)
      starts.push_back((static_cast<double>(j) + 0.5) * length /
                       static_cast<double>(options.start_points));
  }

  TransientEstimate est;
  double sum = 0.0;
  double sum2 = 0.0;
  for (double x0 : starts) {
    const double xi0 = slice_value(slice, dx, x0);
    const double ahead = slice_value(slice, dx, x0 + 0.5 * dx);
    const double behind = slice_value(slice, dx, x0 - 0.5 * dx);
    const double dir = ahead <= behind ? 1.0 : -1.0;

    // The path must stay strictly below the start height; check every node it crosses.
    bool descends = true;
    const auto nodes = static_cast<std::size_t>(std::ceil(1.0 / dx));
    for (std::size_t j = 1; j <= nodes && descends; ++j) {
      const double u = std::min(1.0, static_cast<double>(j) * dx);
      if (slice_value(slice, dx, x0 + dir * u) >= xi0) descends = false;
    }
    if (!descends) {
      ++est.skipped;
      continue;
    }

    // u = w^2 removes the inverse-square-root singularity at the start.
    double integral = 0.0;
    const double h = 1.0 / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = (static_cast<double>(p) + 0.5) * h;
      for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
        const double w = mid + 0.5 * h * kGlNodes[q];
        const double drop = xi0 - slice_value(slice, dx, x0 + dir * w * w);
        if (!(drop > 0.0)) {
          descends = false;
          break;
        }
        integral += 0.5 * h * kGlWeights[q] * 2.0 * w / std::sqrt(2.0 * vtilde * drop);
      }
      if (!descends) break;
    }
    if (!descends) {
      ++est.skipped;
      continue;
    }
    sum += integral;
    sum2 += integral * integral;
    ++est.used;
  }
  if (est.used > 0) {
    const double n = static_cast<double>(est.used);
    est.mean = sum / n;
    est.stderr_of_mean =
        est.used > 1 ? std::sqrt(std::max(0.0, (sum2 - n * est.mean * est.mean) / (n - 1.0)) / n)
                     : 0.0;
  }
  return est;
}

TransientEstimate transient_time_estimate(double vtilde, const PotentialRealization& realization,
                                          const TransientOptions& options) {
  std::vector<double> slice(realization.grid().nx);
  SliceSynthesizer(realization).values(0, slice);
  return transient_time_estimate(vtilde, slice, realization.grid().dx(), options);
}

}  // namespace bflow
