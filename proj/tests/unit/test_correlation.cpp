#include <doctest.h>

#include <cmath>
#include <vector>

#include "bflow/errors.hpp"
#include "bflow/potential.hpp"

using namespace bflow;

namespace {

// Direct O(N^2 M^2) space-time average of xi(x' + x, t' + t) xi(x', t').
double brute_force(const std::vector<PotentialRealization>& reals, std::ptrdiff_t ax,
                   std::ptrdiff_t at) {
  double total = 0.0;
  for (const auto& r : reals) {
    const auto& g = r.grid();
    const auto v = r.values();
    const auto n = static_cast<std::ptrdiff_t>(g.nx), m = static_cast<std::ptrdiff_t>(g.nt);
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < m; ++j)
      for (std::ptrdiff_t i = 0; i < n; ++i)
        s += v[static_cast<std::size_t>(((j + at + m) % m) * n + (i + ax + n) % n)] *
             v[static_cast<std::size_t>(j * n + i)];
    total += s / static_cast<double>(n * m);
  }
  return total / static_cast<double>(reals.size());
}

}  // namespace

TEST_CASE("FFT correlation matches the direct double sum") {
  const CorrelationSpec spec(1.0, 1.0);
  const SimulationGrid grid{8.0, 8.0, 32, 32};
  std::vector<PotentialRealization> reals;
  for (std::uint64_t i = 0; i < 3; ++i) reals.push_back(PotentialRealization::sample(spec, grid, 5, i));
  const auto est = empirical_correlation(reals, 2.0, 2.0);
  REQUIRE(est.lags_x == 8);
  REQUIRE(est.lags_t == 8);
  for (std::ptrdiff_t at = -8; at <= 8; at += 3)
    for (std::ptrdiff_t ax = -8; ax <= 8; ax += 2)
      CHECK(est.at(ax, at) == doctest::Approx(brute_force(reals, ax, at)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("correlation recovers the Gaussian envelope") {
  const CorrelationSpec spec(1.0, 1.0);
  const SimulationGrid grid{25.6, 25.6, 256, 256};
  std::vector<PotentialRealization> reals;
  for (std::uint64_t i = 0; i < 10; ++i) reals.push_back(PotentialRealization::sample(spec, grid, 1, i));
  const auto est = empirical_correlation(reals, 3.0, 3.0);
  CHECK(est.at(0, 0) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(est.at(10, 0) == doctest::Approx(std::exp(-0.5)).epsilon(0.05));
  CHECK(est.at(0, 10) == doctest::Approx(std::exp(-0.5)).epsilon(0.05));
}

TEST_CASE("correlation argument errors") {
  const CorrelationSpec spec(1.0, 1.0);
  const SimulationGrid grid{8.0, 8.0, 32, 32};
  std::vector<PotentialRealization> none;
  CHECK_THROWS_AS(empirical_correlation(none, 1.0, 1.0), ArgumentError);
  std::vector<PotentialRealization> one{PotentialRealization::sample(spec, grid, 1, 0)};
  CHECK_THROWS_AS(empirical_correlation(one, 5.0, 1.0), ArgumentError);
  one.push_back(PotentialRealization::sample(spec, {8.0, 16.0, 32, 64}, 1, 1));
  CHECK_THROWS_AS(empirical_correlation(one, 1.0, 1.0), ArgumentError);
}
