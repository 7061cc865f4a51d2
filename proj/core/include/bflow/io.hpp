#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bflow/analysis.hpp"
#include "bflow/observables.hpp"
#include "bflow/potential.hpp"
#include "bflow/quantum.hpp"

namespace bflow {

// Observable CSV: "# key = value" provenance lines, then "t,value,stderr".
void write_series_csv(std::ostream& out, const ObservableSeries& series);
void write_series_csv(const std::filesystem::path& path, const ObservableSeries& series);

/// Throws FormatError on a malformed header, row, or unknown kind.
ObservableSeries read_series_csv(std::istream& in);
ObservableSeries read_series_csv(const std::filesystem::path& path);

/// Columns tau,v0,vtilde,tb,te,method,valid,tb_over_tau,te_over_tau.
void write_time_scales_csv(std::ostream& out, std::span<const TimeScales> rows,
                           const Provenance& provenance = {});

inline constexpr std::array<char, 4> kGridMagic{'B', 'F', 'G', '1'};
inline constexpr std::array<char, 4> kAmplitudeKind{'P', 'S', 'I', 'A'};

/// "BFG1" grid file: little-endian u32 N, u32 M, f64 dx, dt, tau, v0,
/// u64 seed, u64 index, N*M f64 values (M rows of N). An optional 4-byte
/// kind tag follows the values; potentials carry none.
struct GridFile {
  std::uint32_t nx = 0;
  std::uint32_t nt = 0;
  double dx = 0.0;
  double dt = 0.0;
  double tau = 0.0;
  double v0 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> values;
  std::optional<std::array<char, 4>> kind;
};

void write_grid_file(const std::filesystem::path& path, const GridFile& grid);
/// Throws FormatError for a bad magic, truncated data, or trailing garbage.
GridFile read_grid_file(const std::filesystem::path& path);

/// Streams the realization's values slice by slice.
void write_potential_file(const std::filesystem::path& path,
                          const PotentialRealization& realization);

GridFile to_grid_file(const AmplitudeRaster& raster);

}  // namespace bflow
