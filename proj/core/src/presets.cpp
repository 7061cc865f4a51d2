#include "bflow/presets.hpp"

#include <cmath>
#include <vector>

#include "bflow/errors.hpp"

namespace bflow {

ParameterPoint make_point(double tau, double v0, std::string label) {
  if (!std::isfinite(tau) || !(tau > 0.0)) throw ArgumentError("tau must be finite and > 0");
  if (!std::isfinite(v0) || v0 < 0.0) throw ArgumentError("v0 must be finite and >= 0");
  return {tau, v0, std::move(label)};
}

ParameterPoint point_at_vtilde(double vtilde, double v0, std::string label) {
  if (!(vtilde > 0.0) || !(v0 > 0.0)) throw ArgumentError("vtilde and v0 must be positive");
  return make_point(std::sqrt(vtilde / v0), v0, std::move(label));
}

std::span<const ParameterPoint> presets() {
  static const std::vector<ParameterPoint> table = [] {
    std::vector<ParameterPoint> out;
    for (int n = 0; n <= 5; ++n)
      out.push_back(point_at_vtilde(std::pow(10.0, n - 3), 50.0, "B" + std::to_string(n)));
    for (int n = 0; n <= 4; ++n)
      out.push_back(point_at_vtilde(std::pow(10.0, n - 3), 0.2, "Q" + std::to_string(n)));
    out.push_back(make_point(0.22, 0.83, "topinka"));
    out.push_back(make_point(3.36e-4, 4.42e5, "patsyk"));
    out.push_back(make_point(0.05, 50.0, "B2_rounded"));
    return out;
  }();
  return table;
}

std::optional<ParameterPoint> find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.label == name) return p;
  return std::nullopt;
}

}  // namespace bflow
