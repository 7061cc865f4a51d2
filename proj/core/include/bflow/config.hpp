#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bflow/observables.hpp"

namespace bflow {

/// Settings shared by every run. Keys are namespaced as in the config file
/// (grid.N, ensemble.realizations, seed.master, ...); see config_keys().
struct RunConfig {
  double length = 100.0;          // grid.L
  std::size_t nx = 4096;          // grid.N
  double dt_ratio = 1.0;          // grid.dt_ratio: dt <= ratio * dx^2
  double steps_per_tau = 8.0;     // grid.steps_per_tau: dt <= tau / steps
  double samples_per_tau = 16.0;  // grid.samples_per_tau: potential slices per tau
  double window_factor = 5.0;     // window.factor: T = factor * max(t_b, 1/sqrt(v0))
  std::size_t realizations = 20;  // ensemble.realizations
  std::size_t particles = 1000;   // ensemble.particles
  std::uint64_t master_seed = 1;  // seed.master
  unsigned threads = 0;           // run.threads (0 = all cores)
  std::size_t record_samples = 2048;  // run.record_samples: approximate rows per series
  bool classical = true;          // run.classical
  bool quantum = true;            // run.quantum
  bool raster = false;            // run.raster
  bool share_seeds = true;        // quantum.share_seeds
  std::size_t max_extensions = 4; // run.max_extensions: window doublings for t_b, t_e

  Provenance to_provenance() const;
};

/// Known keys in a fixed order.
const std::vector<std::string>& config_keys();

/// Throws ConfigError naming the key for unknown keys or unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// key = value lines; '#' starts a comment. Throws ConfigError on bad lines.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in);

/// Defaults, then the file (if any), then the overrides in order.
RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::vector<std::pair<std::string, std::string>>& overrides);

/// N = 8192, 104 realizations x 4000 particles.
void apply_paper_scale(RunConfig& config);

}  // namespace bflow
