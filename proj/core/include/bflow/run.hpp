#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bflow/analysis.hpp"
#include "bflow/config.hpp"
#include "bflow/observables.hpp"
#include "bflow/presets.hpp"
#include "bflow/quantum.hpp"

namespace bflow {

/// Simulated window T = factor * max(t_b, 1/sqrt(v0)) with the white-noise
/// t_b; the second term tracks the frozen-potential transient at large
/// vtilde. For v0 = 0 the window is `factor` time units.
double run_window(const ParameterPoint& point, const RunConfig& config);

struct PointResult {
  ParameterPoint point;
  bool ok = true;
  std::string failure;
  double window = 0.0;
  double extended_window = 0.0;  // classical window used for t_b / t_e
  std::size_t extensions = 0;

  std::optional<ObservableSeries> ek_class;
  std::optional<ObservableSeries> sigma2_class;
  std::optional<ObservableSeries> ek_quant;
  std::optional<ObservableSeries> sigma2_quant;
  std::optional<ObservableSeries> scint_quant;
  std::optional<ObservableSeries> ek_white_noise;
  std::optional<AmplitudeRaster> raster;

  TimeScales class_scales;
  TimeScales quant_scales;
  TimeScales wn_scales;
  double chi_class_vs_wn = std::numeric_limits<double>::quiet_NaN();
  double chi_class_vs_quant = std::numeric_limits<double>::quiet_NaN();  // chi(quant, class)
  Provenance provenance;
};

/// Runs the enabled classical and quantum ensembles plus the white-noise
/// analytics for one point. Simulation errors are caught and reported through
/// ok / failure. When the classical t_b or t_e lies beyond the window, the
/// classical run is repeated with the window doubled, up to
/// config.max_extensions times.
PointResult run_point(const ParameterPoint& point, const RunConfig& config);

/// Writes <prefix>_<source>_<kind>.csv for each present series and
/// <prefix>_psi.bfg for the raster.
void write_point_outputs(const PointResult& result, const std::filesystem::path& dir,
                         const std::string& prefix);

struct SweepResult {
  std::vector<PointResult> cells;  // series dropped; ordered by (tau, v0)
  Provenance provenance;

  bool all_ok() const;
};

/// Logarithmic grid of `count` values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t count);

/// Runs every (tau, v0) cell; cells run in parallel on config.threads workers.
/// With `output_dir`, each cell's series are written as they finish.
SweepResult run_sweep(const std::vector<double>& taus, const std::vector<double>& v0s,
                      const RunConfig& config,
                      const std::optional<std::filesystem::path>& output_dir = {});

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

}  // namespace bflow
