#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "bflow/analysis.hpp"
#include "bflow/analytics.hpp"
#include "bflow/errors.hpp"
#include "support.hpp"

using namespace bflow;

namespace {

ObservableSeries series(std::vector<double> t, std::vector<double> v,
                        ObservableKind kind = ObservableKind::kinetic_energy) {
  ObservableSeries s;
  s.kind = kind;
  s.stderrs.assign(t.size(), 0.0);
  s.times = std::move(t);
  s.values = std::move(v);
  return s;
}

ObservableSeries sampled(double t_end, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> t(n + 1), v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    t[i] = t_end * static_cast<double>(i) / static_cast<double>(n);
    v[i] = f(t[i]);
  }
  return series(t, v);
}

}  // namespace

TEST_CASE("chi indicator basics") {
  const auto a = series({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 4.0, 9.0});
  const auto b = series({0.0, 1.0, 2.0, 3.0}, {0.0, 2.0, 8.0, 18.0});
  CHECK(chi_indicator(a, a).value == 0.0);
  const auto r = chi_indicator(a, b);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.excluded == 1);
  CHECK(r.compared == 3);
  // Asymmetric: chi(b, a) = |1 - 2| = 1.
  CHECK(chi_indicator(b, a).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("chi matches the formula on random series") {
  testing::Gen gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(gen.integer(2, 40));
    std::vector<double> t(n), va(n), vb(n);
    double expect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<double>(i) + 1.0;
      va[i] = gen.uniform(-3.0, 3.0);
      vb[i] = gen.uniform(0.1, 3.0) * (gen.next() % 2 ? 1.0 : -1.0);
      expect += (1.0 - va[i] / vb[i]) * (1.0 - va[i] / vb[i]);
    }
    expect = std::sqrt(expect / static_cast<double>(n));
    CHECK(chi_indicator(series(t, va), series(t, vb)).value == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("chi window, resampling and errors") {
  const auto fine = sampled(2.0, 200, [](double t) { return 3.0 * t; });
  const auto coarse = sampled(2.0, 8, [](double t) { return 1.5 * t; });
  CHECK(chi_indicator(fine, coarse).value == doctest::Approx(1.0).epsilon(1e-12));
  ChiOptions window;
  window.t_min = 0.0;
  window.t_max = 1.0;
  const auto r = chi_indicator(fine, coarse, window);
  CHECK(r.compared == 4);
  CHECK(r.excluded == 0);
  const auto zero = series({0.0, 1.0}, {0.0, 0.0});
  CHECK_THROWS_AS(chi_indicator(zero, zero), ArgumentError);
}

TEST_CASE("crossing extraction") {
  SUBCASE("constructed white-noise series crosses at t = 1") {
    const AnalyticParams p(std::sqrt(1.5 / std::sqrt(std::numbers::pi / 2.0)));
    const double dt = 0.01;
    const auto s = sampled(3.0, 300, [&](double t) { return sigma2_white_noise(t, p); });
    const auto c = extract_tb(s);
    CHECK(c.valid);
    CHECK(std::abs(c.time - 1.0) < dt);
  }
  SUBCASE("free quantum dispersion crosses at t = 1") {
    const auto s = sampled(2.0, 64, [](double t) { return 0.5 * (1.0 + t * t); });
    CHECK(extract_tb(s).time == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("no crossing") {
    const auto s = sampled(2.0, 64, [](double t) { return 0.4 * t; });
    CHECK_FALSE(extract_tb(s).valid);
  }
  SUBCASE("linear energy crosses at v0 / gamma^2") {
    const double g2 = 2.5, v0 = 3.0;
    const auto s = sampled(4.0, 400, [&](double t) { return g2 * t; });
    CHECK(extract_te(s, v0).time == doctest::Approx(v0 / g2).epsilon(1e-12));
  }
  SUBCASE("threshold exceeded from the start") {
    const auto s = sampled(4.0, 10, [](double t) { return 0.25 + t; });
    CHECK_FALSE(extract_te(s, 0.2).valid);
  }
  SUBCASE("grid refinement moves the crossing by O(dt)") {
    auto f = [](double t) { return t * t * t + 0.3 * t; };
    const double c1 = extract_tb(sampled(2.0, 50, f)).time;
    const double c2 = extract_tb(sampled(2.0, 5000, f)).time;
    CHECK(std::abs(c1 - c2) < 2.0 / 50.0);
  }
}

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1e-3, 1e-2, 1e-1, 1.0}) pts.emplace_back(x, 2.0 * std::pow(x, -2.0 / 3.0));
  const auto fit = fit_power_law(pts);
  CHECK(std::abs(fit.exponent + 2.0 / 3.0) < 1e-12);
  CHECK(fit.prefactor == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.rms_residual < 1e-10);

  testing::Gen gen(77);
  for (int trial = 0; trial < 100; ++trial) {
    const double beta = gen.uniform(-3.0, 3.0), c = gen.log_uniform(1e-3, 1e3);
    std::vector<std::pair<double, double>> p;
    for (int i = 0; i < gen.integer(3, 10); ++i) {
      const double x = gen.log_uniform(1e-4, 1e4);
      p.emplace_back(x, c * std::pow(x, beta));
    }
    if (std::abs(std::log(p[0].first / p[1].first)) < 1e-6) continue;
    const auto f = fit_power_law(p);
    CHECK(f.exponent == doctest::Approx(beta).epsilon(1e-9).scale(1.0));
    CHECK(f.rms_residual < 1e-10);
  }

  const std::vector<std::pair<double, double>> two{{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS(fit_power_law(two), ArgumentError);
  const std::vector<std::pair<double, double>> neg{{1.0, 1.0}, {2.0, -2.0}, {3.0, 3.0}};
  CHECK_THROWS_AS(fit_power_law(neg), ArgumentError);
}

TEST_CASE("rescaling and method names") {
  const auto s = series({0.0, 0.5, 1.0}, {0.0, 2.0, 4.0});
  const auto r = rescaled(s, 0.5, 2.0);
  CHECK(r.times == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(r.values == std::vector<double>{0.0, 1.0, 2.0});
  for (Method m : {Method::classical_sim, Method::quantum_sim, Method::white_noise})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_FALSE(parse_method("bogus"));
  TimeScales ts;
  ts.tau = 0.5;
  ts.v0 = 8.0;
  ts.tb = {1.0, true};
  ts.te = {2.0, true};
  CHECK(ts.vtilde() == 2.0);
  CHECK(ts.tb_over_tau() == 2.0);
  CHECK(ts.te_over_tau() == 4.0);
  CHECK(ts.valid());
}

TEST_CASE("interpolate") {
  const auto s = series({0.0, 1.0, 3.0}, {1.0, 3.0, 7.0});
  CHECK(interpolate(s, 2.0) == 5.0);
  CHECK(interpolate(s, 1.0) == 3.0);
  CHECK_THROWS_AS(interpolate(s, 3.5), DomainError);
}
