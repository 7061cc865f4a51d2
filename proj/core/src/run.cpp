#include "bflow/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>

#include "bflow/analytics.hpp"
#include "bflow/classical.hpp"
#include "bflow/errors.hpp"
#include "bflow/io.hpp"
#include "bflow/parallel.hpp"

namespace bflow {

namespace {

// Offset that gives quantum runs their own realizations when seeds are not shared.
constexpr std::uint64_t kQuantumIndexOffset = std::uint64_t{1} << 32;

std::size_t record_stride(const SimulationGrid& grid, const ParameterPoint& point, double t_end,
                          const RunConfig& config) {
  const auto stepping =
      dynamics_stepping(grid, point.tau, t_end, config.dt_ratio, config.steps_per_tau);
  return std::max<std::size_t>(1, stepping.steps / std::max<std::size_t>(config.record_samples, 1));
}

ClassicalObservables classical_run(const ParameterPoint& point, const RunConfig& config,
                                   double t_end, unsigned threads) {
  const SimulationGrid grid =
      make_dynamics_grid(config.length, config.nx, t_end, point.tau, config.samples_per_tau);
  const auto stepping =
      dynamics_stepping(grid, point.tau, t_end, config.dt_ratio, config.steps_per_tau);
  validate_for_propagation(grid, stepping.dt, config.dt_ratio);
  EnsembleOptions opt;
  opt.realizations = config.realizations;
  opt.particles = config.particles;
  opt.master_seed = config.master_seed;
  opt.record_stride = record_stride(grid, point, t_end, config);
  opt.threads = threads;
  opt.dt_ratio = config.dt_ratio;
  opt.steps_per_tau = config.steps_per_tau;
  return integrate_ensemble(point.spec(), grid, opt, t_end);
}

void tag(ObservableSeries& s, const ParameterPoint& point, const Provenance& config,
         double window) {
  s.metadata.merge(config);
  s.metadata.set("window.T", window);
  if (!point.label.empty()) s.metadata.set("point.label", point.label);
}

}  // namespace

double run_window(const ParameterPoint& point, const RunConfig& config) {
  if (point.v0 == 0.0) return config.window_factor;
  const double tb = branching_time(point.v0, point.tau);
  return config.window_factor * std::max(tb, 1.0 / std::sqrt(point.v0));
}

namespace {

PointResult run_point_impl(const ParameterPoint& point, const RunConfig& config,
                           unsigned threads) {
  PointResult r;
  r.point = point;
  r.window = run_window(point, config);
  r.extended_window = r.window;
  r.provenance = config.to_provenance();
  r.provenance.set("tau", point.tau);
  r.provenance.set("v0", point.v0);
  r.provenance.set("vtilde", point.vtilde());
  r.provenance.set("window.T", r.window);
  if (!point.label.empty()) r.provenance.set("point.label", point.label);
  const Provenance cfg = config.to_provenance();

  for (auto* ts : {&r.class_scales, &r.quant_scales, &r.wn_scales}) {
    ts->tau = point.tau;
    ts->v0 = point.v0;
  }
  r.class_scales.method = Method::classical_sim;
  r.quant_scales.method = Method::quantum_sim;
  r.wn_scales.method = Method::white_noise;
  if (point.v0 > 0.0) {
    r.wn_scales.tb = {branching_time(point.v0, point.tau), true};
    r.wn_scales.te = {energy_time(point.v0, point.tau), true};
  }

  try {
    const double T = r.window;
    if (config.classical) {
      ClassicalObservables base = classical_run(point, config, T, threads);
      tag(base.kinetic_energy, point, cfg, T);
      tag(base.sigma2, point, cfg, T);
      r.class_scales.tb = extract_tb(base.sigma2);
      r.class_scales.te = extract_te(base.kinetic_energy, point.v0);
      double window = T;
      while (point.v0 > 0.0 && !r.class_scales.valid() && r.extensions < config.max_extensions) {
        window *= 2.0;
        ++r.extensions;
        const ClassicalObservables ext = classical_run(point, config, window, threads);
        if (!r.class_scales.tb.valid) r.class_scales.tb = extract_tb(ext.sigma2);
        if (!r.class_scales.te.valid) r.class_scales.te = extract_te(ext.kinetic_energy, point.v0);
      }
      r.extended_window = window;
      r.ek_class = std::move(base.kinetic_energy);
      r.sigma2_class = std::move(base.sigma2);

      if (point.v0 > 0.0) {
        r.ek_white_noise = white_noise_series(ObservableKind::kinetic_energy, point.spec(),
                                              r.ek_class->times);
        tag(*r.ek_white_noise, point, cfg, T);
        ChiOptions window_opt;
        window_opt.t_min = 0.0;
        window_opt.t_max = T;
        r.chi_class_vs_wn = chi_indicator(*r.ek_class, *r.ek_white_noise, window_opt).value;
      }
    }

    if (config.quantum) {
      const SimulationGrid grid =
          make_dynamics_grid(config.length, config.nx, T, point.tau, config.samples_per_tau);
      const auto stepping =
          dynamics_stepping(grid, point.tau, T, config.dt_ratio, config.steps_per_tau);
      validate_for_propagation(grid, stepping.dt, config.dt_ratio);
      QuantumOptions opt;
      opt.realizations = config.realizations;
      opt.master_seed = config.master_seed;
      opt.first_index = config.share_seeds ? 0 : kQuantumIndexOffset;
      opt.record_stride = record_stride(grid, point, T, config);
      opt.threads = threads;
      opt.raster = config.raster;
      opt.dt_ratio = config.dt_ratio;
      opt.steps_per_tau = config.steps_per_tau;
      QuantumObservables q = propagate_and_observe(point.spec(), grid, opt, T);
      for (auto* s : {&q.kinetic_energy, &q.sigma2, &q.scintillation})
        if (*s) tag(**s, point, cfg, T);
      r.quant_scales.tb = extract_tb(*q.sigma2);
      r.quant_scales.te = extract_te(*q.kinetic_energy, point.v0);
      r.ek_quant = std::move(q.kinetic_energy);
      r.sigma2_quant = std::move(q.sigma2);
      r.scint_quant = std::move(q.scintillation);
      r.raster = std::move(q.raster);
      r.provenance.set("quantum.max_norm_drift", q.max_norm_drift);
      if (r.ek_class) {
        ChiOptions window_opt;
        window_opt.t_min = 0.0;
        window_opt.t_max = T;
        r.chi_class_vs_quant = chi_indicator(*r.ek_quant, *r.ek_class, window_opt).value;
      }
    }
  } catch (const std::exception& e) {
    r.ok = false;
    r.failure = e.what();
  }
  r.provenance.set("window.extended", r.extended_window);
  return r;
}

void drop_series(PointResult& r) {
  r.ek_class.reset();
  r.sigma2_class.reset();
  r.ek_quant.reset();
  r.sigma2_quant.reset();
  r.scint_quant.reset();
  r.ek_white_noise.reset();
  r.raster.reset();
}

std::string cell_prefix(const PointResult& r) {
  return "tau" + format_number(r.point.tau) + "_v0" + format_number(r.point.v0);
}

}  // namespace

PointResult run_point(const ParameterPoint& point, const RunConfig& config) {
  return run_point_impl(point, config, config.threads);
}

void write_point_outputs(const PointResult& r, const std::filesystem::path& dir,
                         const std::string& prefix) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const std::string& suffix) { return dir / (prefix + suffix); };
  if (r.ek_class) write_series_csv(path("_classical_kinetic_energy.csv"), *r.ek_class);
  if (r.sigma2_class) write_series_csv(path("_classical_sigma2.csv"), *r.sigma2_class);
  if (r.ek_quant) write_series_csv(path("_quantum_kinetic_energy.csv"), *r.ek_quant);
  if (r.sigma2_quant) write_series_csv(path("_quantum_sigma2.csv"), *r.sigma2_quant);
  if (r.scint_quant) write_series_csv(path("_quantum_scintillation.csv"), *r.scint_quant);
  if (r.ek_white_noise)
    write_series_csv(path("_white_noise_kinetic_energy.csv"), *r.ek_white_noise);
  if (r.raster) write_grid_file(path("_psi.bfg"), to_grid_file(*r.raster));
}

bool SweepResult::all_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const PointResult& c) { return c.ok; });
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0)
    throw ArgumentError("log_space: need 0 < lo <= hi and count >= 1");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = lo * std::pow(hi / lo, f);
  }
  return out;
}

SweepResult run_sweep(const std::vector<double>& taus, const std::vector<double>& v0s,
                      const RunConfig& config,
                      const std::optional<std::filesystem::path>& output_dir) {
  std::vector<double> ts = taus, vs = v0s;
  std::sort(ts.begin(), ts.end());
  std::sort(vs.begin(), vs.end());
  std::vector<ParameterPoint> points;
  for (double tau : ts)
    for (double v0 : vs) points.push_back(make_point(tau, v0));

  SweepResult sweep;
  sweep.cells.resize(points.size());
  std::mutex write_mutex;
  parallel_for(points.size(), config.threads, [&](std::size_t i) {
    PointResult r = run_point_impl(points[i], config, 1);
    if (output_dir) {
      std::lock_guard lock(write_mutex);
      write_point_outputs(r, *output_dir, cell_prefix(r));
    }
    drop_series(r);
    sweep.cells[i] = std::move(r);
  });
  sweep.provenance = config.to_provenance();
  sweep.provenance.set("sweep.tau_count", static_cast<double>(ts.size()));
  sweep.provenance.set("sweep.v0_count", static_cast<double>(vs.size()));
  return sweep;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  for (const auto& [k, v] : sweep.provenance.entries()) out << "# " << k << " = " << v << '\n';
  out << "tau,v0,vtilde,vtilde_over_bound,status,chi_class_vs_wn,chi_class_vs_quant,"
         "tb_class,tb_quant,tb_wn,te_class,te_quant,te_wn,tb_class_valid,tb_quant_valid,"
         "te_class_valid,te_quant_valid,failure\n";
  const double bound = validity_bound();
  for (const auto& c : sweep.cells) {
    std::string reason = c.failure;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    out << format_number(c.point.tau) << ',' << format_number(c.point.v0) << ','
        << format_number(c.point.vtilde()) << ',' << format_number(c.point.vtilde() / bound) << ','
        << (c.ok ? "ok" : "failed") << ',' << format_number(c.chi_class_vs_wn) << ','
        << format_number(c.chi_class_vs_quant) << ',' << format_number(c.class_scales.tb.time)
        << ',' << format_number(c.quant_scales.tb.time) << ','
        << format_number(c.wn_scales.tb.time) << ',' << format_number(c.class_scales.te.time)
        << ',' << format_number(c.quant_scales.te.time) << ','
        << format_number(c.wn_scales.te.time) << ',' << c.class_scales.tb.valid << ','
        << c.quant_scales.tb.valid << ',' << c.class_scales.te.valid << ','
        << c.quant_scales.te.valid << ',' << reason << '\n';
  }
}

}  // namespace bflow
