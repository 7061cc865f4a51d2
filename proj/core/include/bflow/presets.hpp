#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "bflow/grid.hpp"

namespace bflow {

struct ParameterPoint {
  double tau = 0.0;
  double v0 = 0.0;
  std::string label;

  double vtilde() const noexcept { return v0 * tau * tau; }
  CorrelationSpec spec() const { return CorrelationSpec(v0, tau); }
};

/// Throws ArgumentError unless tau > 0 and v0 >= 0 are finite.
ParameterPoint make_point(double tau, double v0, std::string label = {});

/// B_n (v0 = 50) and Q_n (v0 = 0.2) with vtilde = 10^(n-3); the topinka and
/// patsyk experimental points; B2_rounded with tau = 0.05.
std::span<const ParameterPoint> presets();
std::optional<ParameterPoint> find_preset(std::string_view name);

/// Point with the given vtilde at fixed v0: tau = sqrt(vtilde / v0).
ParameterPoint point_at_vtilde(double vtilde, double v0, std::string label = {});

}  // namespace bflow
