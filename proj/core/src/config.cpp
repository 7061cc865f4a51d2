#include "bflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "bflow/errors.hpp"

namespace bflow {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError("config key '" + std::string(key) + "': '" + std::string(value) +
                    "' is not " + std::string(want));
}

double to_positive(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v) || !(v > 0.0))
    bad_value(key, text, "a positive number");
  return v;
}

template <class T>
T to_count(std::string_view key, std::string_view text, bool allow_zero) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || (!allow_zero && v == 0))
    bad_value(key, text, allow_zero ? "a nonnegative integer" : "a positive integer");
  return v;
}

bool to_flag(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "off" || text == "no") return false;
  bad_value(key, text, "a boolean (0/1)");
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table{
      {"grid.L", [](RunConfig& c, auto k, auto v) { c.length = to_positive(k, v); }},
      {"grid.N", [](RunConfig& c, auto k, auto v) { c.nx = to_count<std::size_t>(k, v, false); }},
      {"grid.dt_ratio", [](RunConfig& c, auto k, auto v) { c.dt_ratio = to_positive(k, v); }},
      {"grid.steps_per_tau",
       [](RunConfig& c, auto k, auto v) { c.steps_per_tau = to_positive(k, v); }},
      {"grid.samples_per_tau",
       [](RunConfig& c, auto k, auto v) { c.samples_per_tau = to_positive(k, v); }},
      {"window.factor", [](RunConfig& c, auto k, auto v) { c.window_factor = to_positive(k, v); }},
      {"ensemble.realizations",
       [](RunConfig& c, auto k, auto v) { c.realizations = to_count<std::size_t>(k, v, false); }},
      {"ensemble.particles",
       [](RunConfig& c, auto k, auto v) { c.particles = to_count<std::size_t>(k, v, false); }},
      {"seed.master",
       [](RunConfig& c, auto k, auto v) { c.master_seed = to_count<std::uint64_t>(k, v, true); }},
      {"run.threads",
       [](RunConfig& c, auto k, auto v) { c.threads = to_count<unsigned>(k, v, true); }},
      {"run.record_samples",
       [](RunConfig& c, auto k, auto v) { c.record_samples = to_count<std::size_t>(k, v, false); }},
      {"run.classical", [](RunConfig& c, auto k, auto v) { c.classical = to_flag(k, v); }},
      {"run.quantum", [](RunConfig& c, auto k, auto v) { c.quantum = to_flag(k, v); }},
      {"run.raster", [](RunConfig& c, auto k, auto v) { c.raster = to_flag(k, v); }},
      {"run.max_extensions",
       [](RunConfig& c, auto k, auto v) { c.max_extensions = to_count<std::size_t>(k, v, true); }},
      {"quantum.share_seeds", [](RunConfig& c, auto k, auto v) { c.share_seeds = to_flag(k, v); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  for (const auto& [k, set] : setters()) {
    if (k == key) {
      set(config, key, v);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

Provenance RunConfig::to_provenance() const {
  Provenance p;
  p.set("grid.L", length);
  p.set("grid.N", static_cast<double>(nx));
  p.set("grid.dt_ratio", dt_ratio);
  p.set("grid.steps_per_tau", steps_per_tau);
  p.set("grid.samples_per_tau", samples_per_tau);
  p.set("window.factor", window_factor);
  p.set("ensemble.realizations", static_cast<double>(realizations));
  p.set("ensemble.particles", static_cast<double>(particles));
  p.set("seed.master", std::to_string(master_seed));
  p.set("run.threads", static_cast<double>(threads));
  p.set("run.record_samples", static_cast<double>(record_samples));
  p.set("run.classical", classical ? "1" : "0");
  p.set("run.quantum", quantum ? "1" : "0");
  p.set("run.raster", raster ? "1" : "0");
  p.set("run.max_extensions", static_cast<double>(max_extensions));
  p.set("quantum.share_seeds", share_seeds ? "1" : "0");
  return p;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig config;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot open config file " + file->string());
    for (const auto& [k, v] : parse_config_text(in)) apply_setting(config, k, v);
  }
  for (const auto& [k, v] : overrides) apply_setting(config, k, v);
  return config;
}

void apply_paper_scale(RunConfig& config) {
  config.nx = 8192;
  config.realizations = 104;
  config.particles = 4000;
}

}  // namespace bflow
