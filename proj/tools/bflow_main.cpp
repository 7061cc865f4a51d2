// bflow: branching-flow simulations, analytics and parameter sweeps.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bflow/analysis.hpp"
#include "bflow/analytics.hpp"
#include "bflow/config.hpp"
#include "bflow/errors.hpp"
#include "bflow/io.hpp"
#include "bflow/potential.hpp"
#include "bflow/presets.hpp"
#include "bflow/run.hpp"

namespace fs = std::filesystem;
using namespace bflow;

namespace {

struct ConfigArgs {
  std::string file;
  std::vector<std::string> sets;
  bool paper_scale = false;
  std::optional<std::size_t> nx, realizations, particles;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override a config key, e.g. --set grid.N=2048");
    app->add_flag("--paper-scale", paper_scale, "N = 8192, 104 realizations x 4000 particles");
    app->add_option("--N", nx, "spatial samples (grid.N)");
    app->add_option("--realizations", realizations, "ensemble.realizations");
    app->add_option("--particles", particles, "ensemble.particles");
    app->add_option("--seed", seed, "seed.master");
    app->add_option("--threads", threads, "run.threads (0 = all cores)");
  }

  RunConfig resolve() const {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (nx) overrides.emplace_back("grid.N", std::to_string(*nx));
    if (realizations) overrides.emplace_back("ensemble.realizations", std::to_string(*realizations));
    if (particles) overrides.emplace_back("ensemble.particles", std::to_string(*particles));
    if (seed) overrides.emplace_back("seed.master", std::to_string(*seed));
    if (threads) overrides.emplace_back("run.threads", std::to_string(*threads));
    RunConfig config = resolve_config(
        file.empty() ? std::nullopt : std::optional<fs::path>(file), {});
    if (paper_scale) apply_paper_scale(config);
    for (const auto& [k, v] : overrides) apply_setting(config, k, v);
    return config;
  }
};

struct PointArgs {
  std::string preset;
  std::optional<double> tau, v0;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "named point (B0..B5, Q0..Q4, topinka, patsyk, B2_rounded)");
    app->add_option("--tau", tau, "correlation time");
    app->add_option("--v0", v0, "potential amplitude");
  }

  ParameterPoint resolve() const {
    if (!preset.empty()) {
      auto p = find_preset(preset);
      if (!p) throw ArgumentError("unknown preset '" + preset + "'");
      if (tau || v0) throw ArgumentError("--preset cannot be combined with --tau/--v0");
      return *p;
    }
    if (!tau || !v0) throw ArgumentError("give --preset or both --tau and --v0");
    return make_point(*tau, *v0);
  }
};

std::string point_prefix(const ParameterPoint& p) {
  if (!p.label.empty()) return p.label;
  return "tau" + format_number(p.tau) + "_v0" + format_number(p.v0);
}

void print_point_summary(const PointResult& r) {
  std::cout << "point " << point_prefix(r.point) << ": tau=" << format_number(r.point.tau)
            << " v0=" << format_number(r.point.v0) << " vtilde=" << format_number(r.point.vtilde())
            << " window=" << format_number(r.window) << '\n';
  auto scales = [](const char* name, const TimeScales& s) {
    std::cout << "  " << name << ": tb=" << (s.tb.valid ? format_number(s.tb.time) : "n/a")
              << " te=" << (s.te.valid ? format_number(s.te.time) : "n/a") << '\n';
  };
  scales("white_noise", r.wn_scales);
  if (r.ek_class) scales("classical", r.class_scales);
  if (r.ek_quant) scales("quantum", r.quant_scales);
  if (!std::isnan(r.chi_class_vs_wn))
    std::cout << "  chi(classical, white_noise) = " << format_number(r.chi_class_vs_wn) << '\n';
  if (!std::isnan(r.chi_class_vs_quant))
    std::cout << "  chi(quantum, classical) = " << format_number(r.chi_class_vs_quant) << '\n';
  if (!r.ok) std::cout << "  FAILED: " << r.failure << '\n';
}

int run_single(const ParameterPoint& point, RunConfig config, const std::string& out_dir) {
  const PointResult r = run_point(point, config);
  write_point_outputs(r, out_dir, point_prefix(point));
  print_point_summary(r);
  return r.ok ? 0 : 1;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError("'" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical branching flow in time-dependent random potentials"};
  app.require_subcommand(1);

  // potential
  auto* potential = app.add_subcommand("potential", "synthesize one realization and write a BFG1 grid");
  double pot_tau = 1.0, pot_v0 = 1.0, pot_L = 25.6, pot_T = 25.6;
  std::size_t pot_N = 512, pot_M = 512;
  std::uint64_t pot_seed = 1, pot_index = 0;
  std::string pot_out = "potential.bfg";
  potential->add_option("--tau", pot_tau, "correlation time")->capture_default_str();
  potential->add_option("--v0", pot_v0, "amplitude stored in the header")->capture_default_str();
  potential->add_option("--L", pot_L, "spatial extent")->capture_default_str();
  potential->add_option("--T", pot_T, "temporal extent")->capture_default_str();
  potential->add_option("--N", pot_N, "spatial samples (power of two)")->capture_default_str();
  potential->add_option("--M", pot_M, "temporal samples (power of two)")->capture_default_str();
  potential->add_option("--seed", pot_seed, "master seed")->capture_default_str();
  potential->add_option("--index", pot_index, "realization index")->capture_default_str();
  potential->add_option("-o,--output", pot_out, "output file")->capture_default_str();

  // classical / quantum / preset
  ConfigArgs cls_cfg, qm_cfg, preset_cfg, sweep_cfg;
  PointArgs cls_pt, qm_pt;
  std::string cls_out = "out", qm_out = "out", preset_out = "out", sweep_out = "sweep";
  auto* classical = app.add_subcommand("classical", "classical ensemble for one point");
  cls_pt.attach(classical);
  cls_cfg.attach(classical);
  classical->add_option("--out", cls_out, "output directory")->capture_default_str();

  auto* quantum = app.add_subcommand("quantum", "quantum ensemble for one point");
  qm_pt.attach(quantum);
  qm_cfg.attach(quantum);
  bool qm_raster = false;
  quantum->add_flag("--raster", qm_raster, "dump |psi(x,t)| of the first plane-wave run");
  quantum->add_option("--out", qm_out, "output directory")->capture_default_str();

  auto* preset = app.add_subcommand("preset", "run a named point (classical + quantum); 'list' prints the table");
  std::string preset_name;
  preset->add_option("name", preset_name, "preset name or 'list'")->required();
  preset_cfg.attach(preset);
  preset->add_option("--out", preset_out, "output directory")->capture_default_str();

  // analytics
  auto* analytics = app.add_subcommand("analytics", "white-noise time scales for a list of points");
  std::vector<std::string> an_presets;
  std::string an_taus, an_v0s, an_out;
  analytics->add_option("--presets", an_presets, "preset names");
  analytics->add_option("--taus", an_taus, "comma-separated tau values (paired with --v0s)");
  analytics->add_option("--v0s", an_v0s, "comma-separated v0 values");
  analytics->add_option("-o,--output", an_out, "CSV file (default stdout)");

  // extract
  auto* extract = app.add_subcommand("extract", "t_b and t_e from observable CSVs");
  std::string ex_sigma2, ex_ek, ex_out, ex_method = "classical_sim";
  std::optional<double> ex_tau, ex_v0;
  extract->add_option("--sigma2", ex_sigma2, "sigma^2 series CSV")->check(CLI::ExistingFile);
  extract->add_option("--ek", ex_ek, "kinetic-energy series CSV")->check(CLI::ExistingFile);
  extract->add_option("--tau", ex_tau, "override tau from the CSV header");
  extract->add_option("--v0", ex_v0, "override v0 from the CSV header");
  extract->add_option("--method", ex_method, "classical_sim, quantum_sim or white_noise")
      ->capture_default_str();
  extract->add_option("-o,--output", ex_out, "CSV file (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "log-spaced (tau, v0) scan");
  double tau_min = 1e-3, tau_max = 10.0, v0_min = 0.1, v0_max = 100.0;
  std::size_t tau_steps = 8, v0_steps = 8;
  sweep->add_option("--tau-min", tau_min)->capture_default_str();
  sweep->add_option("--tau-max", tau_max)->capture_default_str();
  sweep->add_option("--tau-steps", tau_steps)->capture_default_str();
  sweep->add_option("--v0-min", v0_min)->capture_default_str();
  sweep->add_option("--v0-max", v0_max)->capture_default_str();
  sweep->add_option("--v0-steps", v0_steps)->capture_default_str();
  sweep_cfg.attach(sweep);
  sweep->add_option("--out", sweep_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*potential) {
      const CorrelationSpec spec(pot_v0, pot_tau);
      const SimulationGrid grid{pot_L, pot_T, pot_N, pot_M};
      validate_for_synthesis(grid, spec);
      const auto real = PotentialRealization::sample(spec, grid, pot_seed, pot_index);
      write_potential_file(pot_out, real);
      std::cout << "wrote " << pot_out << " (" << pot_N << " x " << pot_M << ")\n";
      return 0;
    }
    if (*classical) {
      RunConfig config = cls_cfg.resolve();
      config.classical = true;
      config.quantum = false;
      return run_single(cls_pt.resolve(), config, cls_out);
    }
    if (*quantum) {
      RunConfig config = qm_cfg.resolve();
      config.classical = false;
      config.quantum = true;
      config.raster = config.raster || qm_raster;
      return run_single(qm_pt.resolve(), config, qm_out);
    }
    if (*preset) {
      if (preset_name == "list") {
        std::cout << "name,tau,v0,vtilde,tb,te\n";
        for (const auto& p : presets())
          std::cout << p.label << ',' << format_number(p.tau) << ',' << format_number(p.v0) << ','
                    << format_number(p.vtilde()) << ',' << format_number(branching_time(p.v0, p.tau))
                    << ',' << format_number(energy_time(p.v0, p.tau)) << '\n';
        return 0;
      }
      auto p = find_preset(preset_name);
      if (!p) throw ArgumentError("unknown preset '" + preset_name + "'");
      return run_single(*p, preset_cfg.resolve(), preset_out);
    }
    if (*analytics) {
      std::vector<ParameterPoint> points;
      for (const auto& name : an_presets) {
        auto p = find_preset(name);
        if (!p) throw ArgumentError("unknown preset '" + name + "'");
        points.push_back(*p);
      }
      const auto taus = an_taus.empty() ? std::vector<double>{} : parse_list(an_taus);
      const auto v0s = an_v0s.empty() ? std::vector<double>{} : parse_list(an_v0s);
      if (taus.size() != v0s.size()) throw ArgumentError("--taus and --v0s must pair up");
      for (std::size_t i = 0; i < taus.size(); ++i) points.push_back(make_point(taus[i], v0s[i]));
      if (points.empty()) {
        const auto all = presets();
        points.assign(all.begin(), all.end());
      }
      std::ofstream file;
      if (!an_out.empty()) file.open(an_out);
      std::ostream& out = an_out.empty() ? std::cout : file;
      out << "label,tau,v0,vtilde,ek_slope,sigma2_cubic,tb,te,tb_over_tau,te_over_tau,"
             "vtilde_over_bound\n";
      for (const auto& p : points) {
        const double slope = p.v0 > 0 ? white_noise_slope(p.v0, p.tau) : 0.0;
        out << p.label << ',' << format_number(p.tau) << ',' << format_number(p.v0) << ','
            << format_number(p.vtilde()) << ',' << format_number(slope) << ','
            << format_number(2.0 / 3.0 * slope) << ',' << format_number(branching_time(p.v0, p.tau))
            << ',' << format_number(energy_time(p.v0, p.tau)) << ','
            << format_number(branching_time_rescaled(p.vtilde())) << ','
            << format_number(energy_time_rescaled(p.vtilde())) << ','
            << format_number(p.vtilde() / validity_bound()) << '\n';
      }
      return 0;
    }
    if (*extract) {
      if (ex_sigma2.empty() && ex_ek.empty()) throw ArgumentError("give --sigma2 and/or --ek");
      const auto method = parse_method(ex_method);
      if (!method) throw ArgumentError("unknown method '" + ex_method + "'");
      TimeScales ts;
      ts.method = *method;
      Provenance prov;
      auto take = [&](const ObservableSeries& s) {
        if (!ex_tau) ex_tau = s.metadata.get_number("tau");
        if (!ex_v0) ex_v0 = s.metadata.get_number("v0");
        prov.merge(s.metadata);
      };
      std::optional<ObservableSeries> s2, ek;
      if (!ex_sigma2.empty()) take(*(s2 = read_series_csv(fs::path(ex_sigma2))));
      if (!ex_ek.empty()) take(*(ek = read_series_csv(fs::path(ex_ek))));
      if (!ex_tau || !ex_v0) throw ArgumentError("tau/v0 missing from CSV headers; pass --tau/--v0");
      ts.tau = *ex_tau;
      ts.v0 = *ex_v0;
      if (s2) ts.tb = extract_tb(*s2);
      if (ek) ts.te = extract_te(*ek, ts.v0);
      prov.set("kind", "time_scales");
      std::ofstream file;
      if (!ex_out.empty()) file.open(ex_out);
      write_time_scales_csv(ex_out.empty() ? std::cout : file, std::span(&ts, 1), prov);
      return 0;
    }
    if (*sweep) {
      const RunConfig config = sweep_cfg.resolve();
      const SweepResult result = run_sweep(log_space(tau_min, tau_max, tau_steps),
                                           log_space(v0_min, v0_max, v0_steps), config, sweep_out);
      fs::create_directories(sweep_out);
      std::ofstream csv(fs::path(sweep_out) / "sweep.csv");
      write_sweep_csv(csv, result);
      std::size_t failed = 0;
      for (const auto& c : result.cells) failed += c.ok ? 0 : 1;
      std::cout << "sweep: " << result.cells.size() << " cells, " << failed << " failed\n";
      return result.all_ok() ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
