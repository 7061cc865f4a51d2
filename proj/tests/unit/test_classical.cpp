#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bflow/analytics.hpp"
#include "bflow/classical.hpp"
#include "bflow/errors.hpp"
#include "support.hpp"

using namespace bflow;

namespace {

double energy_with(const ParticleEnsemble& e, const std::function<double(double)>& potential) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    s += 0.5 * e.velocities[i] * e.velocities[i] + potential(e.positions[i]);
  return s / static_cast<double>(e.size());
}

}  // namespace

TEST_CASE("evenly spaced initial ensemble at rest") {
  const SimulationGrid grid{100.0, 1.0, 4096, 16};
  const auto e = init_ensemble(4, grid);
  CHECK(e.positions == std::vector<double>{12.5, 37.5, 62.5, 87.5});
  CHECK(e.velocities == std::vector<double>(4, 0.0));
  CHECK(e.kinetic_energy() == 0.0);
  CHECK(e.time == 0.0);
  CHECK_THROWS_AS(init_ensemble(0, grid), ArgumentError);
  CHECK_THROWS_AS(init_ensemble(-3, grid), ArgumentError);
}

TEST_CASE("free particles do not move; moving ones wrap but keep unwrapped displacement") {
  const SimulationGrid grid{10.0, 1.0, 1024, 16};
  auto e = init_ensemble(8, grid);
  const auto start = e.positions;
  ZeroForce none;
  for (int s = 0; s < 100; ++s) verlet_step(e, none, 0.01);
  CHECK(e.positions == start);
  CHECK(e.mean_square_displacement() == 0.0);

  auto m = init_ensemble(3, grid);
  for (auto& v : m.velocities) v = 7.0;
  for (int s = 0; s < 1000; ++s) verlet_step(m, none, 0.01);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.positions[i] >= 0.0);
    CHECK(m.positions[i] < grid.length);
    CHECK(m.displacements[i] == doctest::Approx(70.0).epsilon(1e-12));
  }
}

TEST_CASE("verlet step argument checks") {
  const SimulationGrid grid{10.0, 1.0, 1024, 16};
  auto e = init_ensemble(2, grid);
  ZeroForce none;
  CHECK_THROWS_AS(verlet_step(e, none, 0.0), ArgumentError);
  CHECK_THROWS_AS(verlet_step(e, none, -1.0), ArgumentError);
  CHECK_THROWS_AS(verlet_step(e, none, 0.6, 0.5), DomainError);
}

TEST_CASE("harmonic oscillator: bounded energy error and second-order period") {
  const SimulationGrid grid{100.0, 1.0, 1024, 16};
  const double omega = 2.0, centre = 50.0;
  FunctionForce spring([&](double x, double) { return -omega * omega * (x - centre); });
  auto potential = [&](double x) { return 0.5 * omega * omega * (x - centre) * (x - centre); };

  auto run = [&](double dt, std::size_t steps, double& max_err, double& late_err) {
    ParticleEnsemble e = init_ensemble(1, grid);
    e.positions[0] = centre + 1.0;
    const double e0 = energy_with(e, potential);
    max_err = late_err = 0.0;
    double last_x = e.positions[0] - centre;
    std::vector<double> crossings;
    for (std::size_t s = 0; s < steps; ++s) {
      verlet_step(e, spring, dt);
      const double err = std::abs(energy_with(e, potential) - e0) / e0;
      max_err = std::max(max_err, err);
      if (s > steps / 2) late_err = std::max(late_err, err);
      const double x = e.positions[0] - centre;
      if (last_x > 0.0 && x <= 0.0) crossings.push_back(e.time - dt * x / (x - last_x));
      last_x = x;
    }
    return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  };

  double max_err = 0.0, late_err = 0.0;
  const double dt = 0.01;
  run(dt, 10000, max_err, late_err);
  CHECK(max_err < (omega * dt) * (omega * dt));
  CHECK(late_err <= max_err * 1.0000001);  // no secular growth beyond the early envelope

  const double period = 2.0 * std::numbers::pi / omega;
  double a = 0, b = 0;
  const double p1 = run(0.02, 20000, a, b);
  const double p2 = run(0.01, 40000, a, b);
  const double ratio = std::abs(p1 - period) / std::abs(p2 - period);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Richardson check: halving dt shrinks the final-position error about fourfold") {
  const SimulationGrid grid{100.0, 1.0, 1024, 16};
  // Smooth stand-in for a frozen potential slice.
  FunctionForce force([](double x, double) {
    return -3.0 * (std::cos(1.3 * x) - 0.6 * std::sin(0.7 * x + 0.4));
  });
  auto final_positions = [&](double dt) {
    ParticleEnsemble e = init_ensemble(16, grid);
    const auto steps = static_cast<std::size_t>(std::llround(4.0 / dt));
    for (std::size_t s = 0; s < steps; ++s) verlet_step(e, force, dt);
    std::vector<double> d = e.displacements;
    return d;
  };
  const double dt = 0.02;
  const auto ref = final_positions(dt / 8.0);
  const double e1 = testing::max_abs_diff(final_positions(dt), ref);
  const double e2 = testing::max_abs_diff(final_positions(dt / 2.0), ref);
  const double ratio = e1 / e2;
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("frozen potential conserves energy to 1e-4 v0 over 1e4 steps at dt = dx^2") {
  const SimulationGrid grid{100.0, 1.0, 4096, 16};
  const CorrelationSpec spec(1.0, 0.25);
  const auto real = PotentialRealization::sample(spec, make_dynamics_grid(100.0, 4096, 1.0, 0.25), 3, 0);
  for (double v0 : {1.0, 10.0}) {
    FrozenPotentialForce force(real, v0, 0);
    const auto g = force.gradient();
    const double dx = force.dx();
    const std::size_t n = g.size();
    // Exact antiderivative of the piecewise-linear interpolated gradient.
    std::vector<double> node(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) node[i + 1] = node[i] + 0.5 * dx * (g[i] + g[(i + 1) % n]);
    auto potential = [&](double x) {
      const double s = x / dx;
      const auto i = static_cast<std::size_t>(std::floor(s)) % n;
      const double w = s - std::floor(s);
      return v0 * (node[i] + dx * (g[i] * w + 0.5 * (g[(i + 1) % n] - g[i]) * w * w));
    };
    ParticleEnsemble e = init_ensemble(200, grid);
    const double e0 = energy_with(e, potential);
    double worst = 0.0;
    const double dt = dx * dx;
    for (int s = 0; s < 10000; ++s) {
      verlet_step(e, force, dt);
      worst = std::max(worst, std::abs(energy_with(e, potential) - e0));
    }
    CAPTURE(v0);
    CHECK(worst < 1e-4 * v0);
  }
}

TEST_CASE("ensemble observables: determinism, zero force, momentum, monotone spread") {
  const CorrelationSpec spec(50.0, std::sqrt(0.01 / 50.0));
  const double t_end = 0.4;
  const SimulationGrid grid = make_dynamics_grid(100.0, 4096, t_end, spec.tau());
  EnsembleOptions opt;
  opt.realizations = 6;
  opt.particles = 300;
  opt.master_seed = 12;
  opt.record_stride = 20;
  opt.threads = 1;
  const auto a = integrate_ensemble(spec, grid, opt, t_end);
  opt.threads = 3;
  const auto b = integrate_ensemble(spec, grid, opt, t_end);
  CHECK(a.kinetic_energy.values == b.kinetic_energy.values);
  CHECK(a.sigma2.values == b.sigma2.values);
  CHECK(a.sigma2.stderrs == b.sigma2.stderrs);
  CHECK(a.kinetic_energy.times.back() == doctest::Approx(t_end));
  CHECK(a.kinetic_energy.metadata.get("method") == "classical_sim");
  CHECK(a.kinetic_energy.ensemble_count == 6);

  for (std::size_t i = 1; i < a.sigma2.size(); ++i) {
    if (a.sigma2.times[i] <= spec.tau()) continue;
    CHECK(a.sigma2.values[i] >= a.sigma2.values[i - 1] - 3.0 * a.sigma2.stderrs[i]);
  }

  const auto free = integrate_ensemble(CorrelationSpec(0.0, spec.tau()), grid, opt, t_end);
  for (double v : free.sigma2.values) CHECK(v == 0.0);
  for (double v : free.kinetic_energy.values) CHECK(v == 0.0);

  // Mean momentum per realization scatters around zero.
  std::vector<double> means;
  for (std::uint64_t r = 0; r < 12; ++r) {
    const auto real = PotentialRealization::sample(spec, grid, 5, r);
    PotentialForce force(real, spec.v0());
    ParticleEnsemble e = init_ensemble(200, grid);
    const auto steps = dynamics_stepping(grid, spec.tau(), t_end);
    for (std::size_t s = 0; s < steps.steps; ++s) verlet_step(e, force, steps.dt);
    means.push_back(e.mean_velocity());
  }
  double m = 0.0, m2 = 0.0;
  for (double v : means) {
    m += v;
    m2 += v * v;
  }
  m /= static_cast<double>(means.size());
  const double sd = std::sqrt(m2 / static_cast<double>(means.size()) - m * m);
  CHECK(std::abs(m) < 4.0 * sd / std::sqrt(static_cast<double>(means.size())) + 1e-12);
}

TEST_CASE("vtilde = 0.1 energy growth falls below the white-noise line and bends over") {
  const CorrelationSpec spec(50.0, std::sqrt(0.1 / 50.0));
  const double t_end = 5.0 * branching_time(spec.v0(), spec.tau());
  const SimulationGrid grid = make_dynamics_grid(100.0, 4096, t_end, spec.tau());
  EnsembleOptions opt;
  opt.realizations = 6;
  opt.particles = 500;
  opt.record_stride = 10;
  opt.threads = 1;
  const auto obs = integrate_ensemble(spec, grid, opt, t_end);
  const auto& ek = obs.kinetic_energy;
  CHECK(ek.values.back() < ek_white_noise(ek.times.back(), spec.v0(), spec.tau()));
  // Concave: the late mean slope is below the early mean slope (after one tau).
  const std::size_t n = ek.size();
  std::size_t i0 = 0;
  while (ek.times[i0] < spec.tau()) ++i0;
  const std::size_t mid = (i0 + n - 1) / 2;
  const double early = (ek.values[mid] - ek.values[i0]) / (ek.times[mid] - ek.times[i0]);
  const double late = (ek.values[n - 1] - ek.values[mid]) / (ek.times[n - 1] - ek.times[mid]);
  CHECK(late < early);
}
