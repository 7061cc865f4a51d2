#include "bflow/observables.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "bflow/errors.hpp"

namespace bflow {

std::string_view to_string(ObservableKind kind) noexcept {
  switch (kind) {
    case ObservableKind::kinetic_energy: return "kinetic_energy";
    case ObservableKind::sigma2: return "sigma2";
    case ObservableKind::scintillation: return "scintillation";
  }
  return "unknown";
}

std::optional<ObservableKind> parse_observable_kind(std::string_view text) noexcept {
  if (text == "kinetic_energy") return ObservableKind::kinetic_energy;
  if (text == "sigma2") return ObservableKind::sigma2;
  if (text == "scintillation") return ObservableKind::scintillation;
  return std::nullopt;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void Provenance::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void Provenance::set(std::string key, double value) { set(std::move(key), format_number(value)); }

void Provenance::merge(const Provenance& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
}

std::optional<std::string> Provenance::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::optional<double> Provenance::get_number(std::string_view key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  if (*v == "nan") return std::nan("");
  if (*v == "inf") return INFINITY;
  double out = 0.0;
  auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) return std::nullopt;
  return out;
}

void ObservableSeries::validate() const {
  if (values.size() != times.size() || stderrs.size() != times.size())
    throw ArgumentError("ObservableSeries: column lengths differ");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
      throw ArgumentError("ObservableSeries: non-finite entry at row " + std::to_string(i));
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ArgumentError("ObservableSeries: times not strictly increasing at row " +
                          std::to_string(i));
  }
}

ObservableSeries ObservableSeries::truncated(double t_max) const {
  ObservableSeries out;
  out.kind = kind;
  out.ensemble_count = ensemble_count;
  out.metadata = metadata;
  for (std::size_t i = 0; i < times.size() && times[i] <= t_max; ++i) {
    out.times.push_back(times[i]);
    out.values.push_back(values[i]);
    out.stderrs.push_back(stderrs[i]);
  }
  return out;
}

ObservableSeries reduce_realizations(ObservableKind kind, std::vector<double> times,
                                     std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw ArgumentError("reduce_realizations: no realizations");
  const std::size_t n = times.size();
  for (const auto& r : rows)
    if (r.size() < n) throw ArgumentError("reduce_realizations: short realization row");
  ObservableSeries out;
  out.kind = kind;
  out.ensemble_count = rows.size();
  out.values.assign(n, 0.0);
  out.stderrs.assign(n, 0.0);
  const double count = static_cast<double>(rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[i];
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[i] - mean) * (r[i] - mean);
    out.values[i] = mean;
    out.stderrs[i] = rows.size() > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
  }
  out.times = std::move(times);
  return out;
}

}  // namespace bflow
