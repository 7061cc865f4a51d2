#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bflow {

enum class ObservableKind { kinetic_energy, sigma2, scintillation };

std::string_view to_string(ObservableKind kind) noexcept;
std::optional<ObservableKind> parse_observable_kind(std::string_view text) noexcept;

/// Ordered key = value provenance lines carried by every output.
class Provenance {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void merge(const Provenance& other);
  std::optional<std::string> get(std::string_view key) const;
  std::optional<double> get_number(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Round-trip decimal rendering used for all text outputs.
std::string format_number(double value);

/// Ensemble-averaged observable sampled on a strictly increasing time grid.
struct ObservableSeries {
  ObservableKind kind = ObservableKind::kinetic_energy;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::size_t ensemble_count = 0;
  Provenance metadata;

  std::size_t size() const noexcept { return times.size(); }

  /// Throws ArgumentError unless times are strictly increasing, all columns
  /// have equal length, and every value is finite.
  void validate() const;

  /// Keeps samples with time <= t_max.
  ObservableSeries truncated(double t_max) const;
};

/// Mean and standard error across realizations, reduced in realization order.
/// `rows[r][i]` is realization r's value at times[i].
ObservableSeries reduce_realizations(ObservableKind kind, std::vector<double> times,
                                     std::span<const std::vector<double>> rows);

}  // namespace bflow
