#include <cmath>

#include "bflow/errors.hpp"
#include "bflow/potential.hpp"

namespace bflow {

double CorrelationEstimate::at(std::ptrdiff_t ix, std::ptrdiff_t it) const {
  const auto lx = static_cast<std::ptrdiff_t>(lags_x);
  const auto lt = static_cast<std::ptrdiff_t>(lags_t);
  if (std::abs(ix) > lx || std::abs(it) > lt) throw ArgumentError("CorrelationEstimate: lag out of range");
  return values[static_cast<std::size_t>((it + lt) * (2 * lx + 1) + (ix + lx))];
}

CorrelationEstimate empirical_correlation(std::span<const PotentialRealization> realizations,
                                          double max_lag_x, double max_lag_t) {
  if (realizations.empty()) throw ArgumentError("empirical_correlation: no realizations");
  const SimulationGrid g = realizations.front().grid();
  for (const auto& r : realizations) {
    const SimulationGrid& o = r.grid();
    if (o.nx != g.nx || o.nt != g.nt || o.length != g.length || o.duration != g.duration)
      throw ArgumentError("empirical_correlation: realizations must share one grid");
  }
  if (max_lag_x < 0.0 || max_lag_t < 0.0) throw ArgumentError("empirical_correlation: negative lag");
  const auto lx = static_cast<std::size_t>(std::floor(max_lag_x / g.dx() + 1e-9));
  const auto lt = static_cast<std::size_t>(std::floor(max_lag_t / g.dt() + 1e-9));
  if (lx > g.nx / 2 || lt > g.nt / 2)
    throw ArgumentError("empirical_correlation: lags exceed half the domain");

  CorrelationEstimate est;
  est.lags_x = lx;
  est.lags_t = lt;
  est.dx = g.dx();
  est.dt = g.dt();
  const std::size_t wx = 2 * lx + 1;
  est.values.assign(wx * (2 * lt + 1), 0.0);

  // Circular autocorrelation via |F|^2; rows are time slices.
  fft::RealFft2d plan(g.nt, g.nx);
  const double points = static_cast<double>(g.nx) * static_cast<double>(g.nt);
  const double scale = 1.0 / (points * points * static_cast<double>(realizations.size()));
  for (const auto& r : realizations) {
    auto v = r.values();
    auto real = plan.real();
    std::copy(v.begin(), v.end(), real.begin());
    plan.forward();
    for (auto& c : plan.spectrum()) c = std::norm(c);
    plan.backward();
    for (std::size_t it = 0; it < 2 * lt + 1; ++it) {
      const auto dt_lag = static_cast<std::ptrdiff_t>(it) - static_cast<std::ptrdiff_t>(lt);
      const auto row = static_cast<std::size_t>((dt_lag + static_cast<std::ptrdiff_t>(g.nt)) %
                                                static_cast<std::ptrdiff_t>(g.nt));
      for (std::size_t ix = 0; ix < wx; ++ix) {
        const auto dx_lag = static_cast<std::ptrdiff_t>(ix) - static_cast<std::ptrdiff_t>(lx);
        const auto col = static_cast<std::size_t>((dx_lag + static_cast<std::ptrdiff_t>(g.nx)) %
                                                  static_cast<std::ptrdiff_t>(g.nx));
        est.values[it * wx + ix] += real[row * g.nx + col] * scale;
      }
    }
  }
  return est;
}

}  // namespace bflow
