#include "bflow/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "bflow/errors.hpp"

namespace bflow {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text, std::size_t line) {
  const std::string t = trim(text);
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (t == "inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw FormatError("line " + std::to_string(line) + ": '" + t + "' is not a number");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  return out;
}

template <class T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get(std::istream& in, const std::string& what) {
  std::array<char, sizeof(T)> bytes{};
  if (!in.read(bytes.data(), bytes.size())) throw FormatError("truncated grid file reading " + what);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

void write_header(std::ostream& out, const GridFile& g) {
  out.write(kGridMagic.data(), kGridMagic.size());
  put(out, g.nx);
  put(out, g.nt);
  put(out, g.dx);
  put(out, g.dt);
  put(out, g.tau);
  put(out, g.v0);
  put(out, g.seed);
  put(out, g.index);
}

}  // namespace

void write_series_csv(std::ostream& out, const ObservableSeries& s) {
  s.validate();
  bool has_kind = false;
  for (const auto& [k, v] : s.metadata.entries()) {
    out << "# " << k << " = " << v << '\n';
    has_kind = has_kind || k == "kind";
  }
  if (!has_kind) out << "# kind = " << to_string(s.kind) << '\n';
  out << "t,value,stderr\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << format_number(s.times[i]) << ',' << format_number(s.values[i]) << ','
        << format_number(s.stderrs[i]) << '\n';
}

void write_series_csv(const std::filesystem::path& path, const ObservableSeries& s) {
  auto out = open_out(path);
  write_series_csv(out, s);
  if (!out) throw FormatError("failed writing " + path.string());
}

ObservableSeries read_series_csv(std::istream& in) {
  ObservableSeries s;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (!header && line.starts_with('#')) {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw FormatError("line " + std::to_string(lineno) + ": provenance line without '='");
      s.metadata.set(trim(std::string_view(line).substr(1, eq - 1)),
                     trim(std::string_view(line).substr(eq + 1)));
      continue;
    }
    if (!header) {
      if (trim(line) != "t,value,stderr")
        throw FormatError("line " + std::to_string(lineno) + ": expected header t,value,stderr");
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      throw FormatError("line " + std::to_string(lineno) + ": expected 3 columns");
    std::string_view v(line);
    s.times.push_back(parse_double(v.substr(0, c1), lineno));
    s.values.push_back(parse_double(v.substr(c1 + 1, c2 - c1 - 1), lineno));
    s.stderrs.push_back(parse_double(v.substr(c2 + 1), lineno));
  }
  if (!header) throw FormatError("missing t,value,stderr header");
  if (auto kind = s.metadata.get("kind")) {
    auto parsed = parse_observable_kind(*kind);
    if (!parsed) throw FormatError("unknown observable kind '" + *kind + "'");
    s.kind = *parsed;
  }
  if (auto n = s.metadata.get_number("ensemble.realizations"))
    s.ensemble_count = static_cast<std::size_t>(*n);
  try {
    s.validate();
  } catch (const ArgumentError& e) {
    throw FormatError(e.what());
  }
  return s;
}

ObservableSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_series_csv(in);
}

void write_time_scales_csv(std::ostream& out, std::span<const TimeScales> rows,
                           const Provenance& provenance) {
  for (const auto& [k, v] : provenance.entries()) out << "# " << k << " = " << v << '\n';
  out << "tau,v0,vtilde,tb,te,method,valid,tb_over_tau,te_over_tau\n";
  for (const auto& r : rows) {
    out << format_number(r.tau) << ',' << format_number(r.v0) << ',' << format_number(r.vtilde())
        << ',' << format_number(r.tb.time) << ',' << format_number(r.te.time) << ','
        << to_string(r.method) << ',' << (r.valid() ? 1 : 0) << ','
        << format_number(r.tb_over_tau()) << ',' << format_number(r.te_over_tau()) << '\n';
  }
}

void write_grid_file(const std::filesystem::path& path, const GridFile& g) {
  if (g.values.size() != static_cast<std::size_t>(g.nx) * g.nt)
    throw ArgumentError("grid file: value count does not match N*M");
  auto out = open_out(path, std::ios::binary);
  write_header(out, g);
  for (double v : g.values) put(out, v);
  if (g.kind) out.write(g.kind->data(), g.kind->size());
  if (!out) throw FormatError("failed writing " + path.string());
}

GridFile read_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kGridMagic)
    throw FormatError(path.string() + " is not a BFG1 grid file");
  GridFile g;
  g.nx = get<std::uint32_t>(in, "N");
  g.nt = get<std::uint32_t>(in, "M");
  g.dx = get<double>(in, "dx");
  g.dt = get<double>(in, "dt");
  g.tau = get<double>(in, "tau");
  g.v0 = get<double>(in, "v0");
  g.seed = get<std::uint64_t>(in, "seed");
  g.index = get<std::uint64_t>(in, "index");
  const std::size_t count = static_cast<std::size_t>(g.nx) * g.nt;
  g.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) g.values[i] = get<double>(in, "values");
  std::array<char, 4> tag{};
  in.read(tag.data(), tag.size());
  if (in.gcount() == 4) {
    g.kind = tag;
  } else if (in.gcount() != 0) {
    throw FormatError(path.string() + ": trailing bytes after values");
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw FormatError(path.string() + ": trailing bytes after kind tag");
  return g;
}

void write_potential_file(const std::filesystem::path& path,
                          const PotentialRealization& realization) {
  const SimulationGrid& grid = realization.grid();
  GridFile header;
  header.nx = static_cast<std::uint32_t>(grid.nx);
  header.nt = static_cast<std::uint32_t>(grid.nt);
  header.dx = grid.dx();
  header.dt = grid.dt();
  header.tau = realization.spec().tau();
  header.v0 = realization.spec().v0();
  header.seed = realization.master_seed();
  header.index = realization.index();
  auto out = open_out(path, std::ios::binary);
  write_header(out, header);
  SliceSynthesizer synth(realization);
  std::vector<double> slice(grid.nx);
  for (std::size_t j = 0; j < grid.nt; ++j) {
    synth.values(j, slice);
    for (double v : slice) put(out, v);
  }
  if (!out) throw FormatError("failed writing " + path.string());
}

GridFile to_grid_file(const AmplitudeRaster& r) {
  GridFile g;
  g.nx = static_cast<std::uint32_t>(r.nx);
  g.nt = static_cast<std::uint32_t>(r.nt);
  g.dx = r.dx;
  g.dt = r.dt;
  g.tau = r.tau;
  g.v0 = r.v0;
  g.seed = r.seed;
  g.index = r.index;
  g.values = r.values;
  g.kind = kAmplitudeKind;
  return g;
}

}  // namespace bflow
