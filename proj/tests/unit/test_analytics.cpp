#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "bflow/analytics.hpp"
#include "bflow/errors.hpp"
#include "bflow/grid.hpp"
#include "bflow/potential.hpp"
#include "support.hpp"

using namespace bflow;

namespace {

constexpr double kPi = std::numbers::pi;

double erf_integral_oracle(double z) {
  return testing::adaptive_simpson([](double s) { return std::erf(s); }, 0.0, z, 1e-13);
}

}  // namespace

TEST_CASE("erf antiderivative agrees with adaptive quadrature") {
  CHECK(erf_integral_oracle(1.0) == doctest::Approx(0.48606).epsilon(1e-5));
  testing::Gen gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const double z = gen.uniform(0.0, 6.0);
    CHECK(std::abs(erf_integral(z) - erf_integral_oracle(z)) < 1e-10);
  }
}

TEST_CASE("random-force kinetic energy") {
  const AnalyticParams unit(1.0);
  CHECK(ek_random_force(0.0, AnalyticParams(0.3, 0.7)) == 0.7);
  const double expected = std::sqrt(kPi) * erf_integral_oracle(1.0);
  CHECK(ek_random_force(std::sqrt(2.0), unit) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(ek_random_force(std::sqrt(2.0), unit) == doctest::Approx(0.8616).epsilon(1e-4));
  for (double t : {20.0, 50.0, 200.0}) {
    const double h = 1e-3;
    const double slope = (ek_random_force(t + h, unit) - ek_random_force(t - h, unit)) / (2 * h);
    CHECK(slope / unit.gamma2() == doctest::Approx(1.0).epsilon(0.01));
  }
  // At late times the random-force energy trails the white-noise line by vtilde^2.
  for (double t : {20.0, 50.0, 400.0})
    CHECK(ek_random_force(t, unit) / ek_white_noise(t, unit) ==
          doctest::Approx(1.0 - std::sqrt(2.0 / kPi) / t).epsilon(1e-12));
  CHECK_THROWS_AS(ek_random_force(-1.0, unit), DomainError);
}

TEST_CASE("random-force energy is convex and increasing from zero slope") {
  const AnalyticParams p(0.8);
  double last = ek_random_force(0.0, p), last_slope = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double t = 0.05 * i;
    const double e = ek_random_force(t, p);
    const double slope = (e - last) / 0.05;
    CHECK(slope > 0.0);
    CHECK(slope >= last_slope - 1e-9);
    last = e;
    last_slope = slope;
  }
  const double h = 1e-6;
  CHECK(ek_random_force(h, p) / h < 1e-5);
}

TEST_CASE("white-noise forms") {
  CHECK(ek_white_noise(3.0, AnalyticParams(0.0, 0.4)) == 0.4);
  CHECK(AnalyticParams(2.0).gamma2() == 4.0 * std::sqrt(kPi / 2.0));
  const double vt = std::sqrt(1.5 / std::sqrt(kPi / 2.0));  // gamma^2 = 3/2
  CHECK(sigma2_white_noise(1.0, AnalyticParams(vt)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sigma2_white_noise(0.0, AnalyticParams(vt)) == 0.0);
  CHECK(ek_white_noise(0.22, 50.0, 0.0447) == doctest::Approx(30.8).epsilon(0.005));
  const double base = ek_white_noise(0.5, AnalyticParams(1.0)) ;
  CHECK(ek_white_noise(0.5, AnalyticParams(std::sqrt(2.0))) == doctest::Approx(2.0 * base).epsilon(1e-14));
  // Quantum units are the classical forms with t -> t / tau, eps -> eps / tau^2.
  testing::Gen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const double v0 = gen.log_uniform(0.1, 100.0), tau = gen.log_uniform(1e-3, 10.0);
    const double t = gen.uniform(0.0, 10.0 * tau);
    const AnalyticParams p(v0 * tau * tau);
    CHECK(ek_random_force(t, v0, tau) == doctest::Approx(ek_random_force(t / tau, p) / (tau * tau)).epsilon(1e-12));
    CHECK(ek_white_noise(t, v0, tau) == doctest::Approx(ek_white_noise(t / tau, p) / (tau * tau)).epsilon(1e-12));
    CHECK(sigma2_white_noise(t, v0, tau) == doctest::Approx(sigma2_white_noise(t / tau, p)).epsilon(1e-12));
  }
}

TEST_CASE("branching and energy times") {
  CHECK(branching_time(50.0, 0.04472) == doctest::Approx(0.2204).epsilon(5e-4));
  CHECK(sigma2_white_noise(branching_time(50.0, 0.0447), 50.0, 0.0447) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(branching_time(8.0 * 3.0, 0.2) == doctest::Approx(branching_time(3.0, 0.2) / 4.0).epsilon(1e-14));
  CHECK(branching_time_rescaled(validity_bound()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(energy_time_rescaled(1.0) == doctest::Approx(0.7979).epsilon(1e-4));
  CHECK(energy_time_rescaled(2.0) == doctest::Approx(energy_time_rescaled(1.0) / 2.0).epsilon(1e-15));
  CHECK(energy_time_rescaled(0.05) == doctest::Approx(15.96).epsilon(1e-3));
  CHECK(branching_time_rescaled(0.05) == doctest::Approx(std::pow(9.0 / (2.0 * kPi), 1.0 / 6.0) * std::pow(0.05, -2.0 / 3.0)).epsilon(1e-14));
  CHECK(branching_time_rescaled(0.05) == doctest::Approx(7.87).epsilon(0.01));
  CHECK(energy_time_rescaled(0.05) > branching_time_rescaled(0.05));
  CHECK(branching_time(0.0, 1.0) == kInfiniteTime);
  CHECK(energy_time(0.0, 1.0) == kInfiniteTime);
  CHECK(ek_white_noise(energy_time(3.0, 0.5), 3.0, 0.5) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(validity_bound() == doctest::Approx(1.09).epsilon(5e-3));
  const double star = crossing_vtilde();
  CHECK(star == doctest::Approx(0.42441).epsilon(1e-4));
  CHECK(branching_time_rescaled(star) == doctest::Approx(energy_time_rescaled(star)).epsilon(1e-12));
  CHECK_THROWS_AS(branching_time(-1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(energy_time(1.0, 0.0), ArgumentError);
}

TEST_CASE("transient estimate on a linear ramp matches the closed form") {
  const double dx = 0.01, s = 0.8, vtilde = 3.0;
  std::vector<double> slice(1000);
  for (std::size_t i = 0; i < slice.size(); ++i) slice[i] = 5.0 - s * (static_cast<double>(i) * dx - 2.0);
  TransientOptions opt;
  opt.starts = {2.0, 2.5, 3.0};
  const auto est = transient_time_estimate(vtilde, slice, dx, opt);
  CHECK(est.used == 3);
  CHECK(est.skipped == 0);
  CHECK(est.mean == doctest::Approx(std::sqrt(2.0 / (vtilde * s))).epsilon(1e-9));
}

TEST_CASE("transient estimate on a Gaussian-spectrum slice") {
  const CorrelationSpec spec(1.0, 1.0);
  const auto real = PotentialRealization::sample(spec, make_dynamics_grid(100.0, 4096, 1.0, 1.0), 2, 0);
  const auto a = transient_time_estimate(10.0, real);
  const auto b = transient_time_estimate(40.0, real);
  CHECK(a.used >= 20);
  CHECK(a.used + a.skipped == 128);
  CHECK(a.mean > 0.0);
  CHECK(std::isfinite(a.mean));
  CHECK(b.mean < a.mean);
  CHECK(a.mean / b.mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(transient_time_estimate(0.0, real), ArgumentError);
}

TEST_CASE("closed forms are pure") {
  const double a = branching_time(12.3, 0.456), b = branching_time(12.3, 0.456);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}
