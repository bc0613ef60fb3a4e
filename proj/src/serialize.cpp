#include "triclock/serialize.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace triclock {

void to_json(json& j, const Vec2& v) { j = json::array({v.x, v.y}); }
void from_json(const json& j, Vec2& v) { v = {j.at(0).get<double>(), j.at(1).get<double>()}; }

void to_json(json& j, const PhasePoint& p) { j = json::array({p.x, p.y}); }
void from_json(const json& j, PhasePoint& p) {
  p = {j.at(0).get<double>(), j.at(1).get<double>()};
}

void to_json(json& j, const Mat2& m) { j = json::array({{m.a, m.b}, {m.c, m.d}}); }
void from_json(const json& j, Mat2& m) {
  m = {j.at(0).at(0).get<double>(), j.at(0).at(1).get<double>(), j.at(1).at(0).get<double>(),
       j.at(1).at(1).get<double>()};
}

void to_json(json& j, const CouplingParams& p) {
  j = {{"epsilon", p.epsilon}, {"mu", p.mu}, {"h", p.h}, {"alpha", p.alpha}, {"omega", p.omega}};
}
void from_json(const json& j, CouplingParams& p) {
  p.epsilon = j.at("epsilon").get<double>();
  p.mu = j.value("mu", p.mu);
  p.h = j.value("h", p.h);
  p.alpha = j.value("alpha", p.alpha);
  p.omega = j.value("omega", p.omega);
}

void to_json(json& j, const FixedPointRecord& r) {
  j = {{"location", r.location},
       {"jacobian", r.jacobian},
       {"eigenvalues", r.eigenvalues},
       {"eigenvectors", r.eigenvectors},
       {"class", to_string(r.stability)}};
}
void from_json(const json& j, FixedPointRecord& r) {
  r.location = j.at("location").get<PhasePoint>();
  r.jacobian = j.at("jacobian").get<Mat2>();
  r.eigenvalues = j.at("eigenvalues").get<std::array<double, 2>>();
  r.eigenvectors = j.at("eigenvectors").get<std::array<Vec2, 2>>();
  r.stability = stability_class_from_string(j.at("class").get<std::string>());
}

void to_json(json& j, const SegmentVerification& s) {
  j = {{"segment", to_string(s.name)},
       {"samples", s.samples},
       {"max_deviation", s.max_deviation},
       {"max_restriction_error", s.max_restriction_error},
       {"min_derivative", s.min_derivative},
       {"increasing", s.increasing},
       {"passed", s.passed},
       {"offending_t", s.offending_t ? json(*s.offending_t) : json(nullptr)}};
}
void from_json(const json& j, SegmentVerification& s) {
  s.name = segment_name_from_string(j.at("segment").get<std::string>());
  s.samples = j.at("samples").get<std::size_t>();
  s.max_deviation = j.at("max_deviation").get<double>();
  s.max_restriction_error = j.at("max_restriction_error").get<double>();
  s.min_derivative = j.at("min_derivative").get<double>();
  s.increasing = j.at("increasing").get<bool>();
  s.passed = j.at("passed").get<bool>();
  const json& off = j.at("offending_t");
  s.offending_t = off.is_null() ? std::nullopt : std::optional<double>(off.get<double>());
}

void to_json(json& j, const Connection& c) {
  j = {{"source", c.source},
       {"target", c.target},
       {"source_class", to_string(c.source_class)},
       {"target_class", to_string(c.target_class)},
       {"kind", to_string(c.kind)},
       {"via", c.via}};
}
void from_json(const json& j, Connection& c) {
  c.source = j.at("source").get<PhasePoint>();
  c.target = j.at("target").get<PhasePoint>();
  c.source_class = stability_class_from_string(j.at("source_class").get<std::string>());
  c.target_class = stability_class_from_string(j.at("target_class").get<std::string>());
  c.kind = connection_kind_from_string(j.at("kind").get<std::string>());
  c.via = j.at("via").get<std::string>();
}

void to_json(json& j, const HeteroclinicOrbit& o) {
  j = {{"source", o.source},
       {"target", o.target},
       {"kind", to_string(o.kind)},
       {"samples", o.samples}};
}
void from_json(const json& j, HeteroclinicOrbit& o) {
  o.source = j.at("source").get<FixedPointRecord>();
  o.target = j.at("target").get<FixedPointRecord>();
  o.kind = connection_kind_from_string(j.at("kind").get<std::string>());
  o.samples = j.at("samples").get<std::vector<PhasePoint>>();
}

void to_json(json& j, const LyapunovReport& r) {
  j = {{"region", to_string(r.region)},
       {"grid_resolution", r.grid_resolution},
       {"epsilon", r.epsilon},
       {"samples", r.samples},
       {"max_DF", r.max_df},
       {"argmax", r.argmax},
       {"max_DF_away", r.max_df_away},
       {"exclusion_radius", r.exclusion_radius},
       {"zero_set", r.zero_set},
       {"passed", r.passed}};
}
void from_json(const json& j, LyapunovReport& r) {
  r.region = region_from_string(j.at("region").get<std::string>());
  r.grid_resolution = j.at("grid_resolution").get<int>();
  r.epsilon = j.at("epsilon").get<double>();
  r.samples = j.at("samples").get<std::size_t>();
  r.max_df = j.at("max_DF").get<double>();
  r.argmax = j.at("argmax").get<PhasePoint>();
  r.max_df_away = j.at("max_DF_away").get<double>();
  r.exclusion_radius = j.at("exclusion_radius").get<double>();
  r.zero_set = j.at("zero_set").get<std::vector<PhasePoint>>();
  r.passed = j.at("passed").get<bool>();
}

void to_json(json& j, const KickEvent& e) {
  j = {{"cycle_index", e.cycle_index},
       {"kicking_clock", e.kicking_clock},
       {"time", e.time},
       {"phases_before", e.phases_before},
       {"phases_after", e.phases_after}};
}
void from_json(const json& j, KickEvent& e) {
  e.cycle_index = j.at("cycle_index").get<std::size_t>();
  e.kicking_clock = j.at("kicking_clock").get<std::size_t>();
  e.time = j.value("time", 0.0);
  e.phases_before = j.at("phases_before").get<std::vector<double>>();
  e.phases_after = j.at("phases_after").get<std::vector<double>>();
}

void to_json(json& j, const FiringPattern& f) {
  j = {{"offsets", f.offsets}, {"order", f.order}, {"gaps", f.gaps}};
}
void from_json(const json& j, FiringPattern& f) {
  f.offsets = j.at("offsets").get<std::vector<double>>();
  f.order = j.at("order").get<std::vector<std::size_t>>();
  f.gaps = j.at("gaps").get<std::vector<double>>();
}

void to_json(json& j, const LockResult& r) {
  j = {{"final_phases", r.final_state.phases},
       {"cycles", r.cycles},
       {"locked", r.locked},
       {"differences", r.differences},
       {"phase_gaps", r.phase_gaps},
       {"firing", r.firing}};
}

json census_to_json(const HeteroclinicCensus& census) {
  return {{"counts",
           {{"sa", census.count(ConnectionKind::sa)},
            {"rs", census.count(ConnectionKind::rs)},
            {"ra", census.count(ConnectionKind::ra)},
            {"other", census.count(ConnectionKind::other)}}},
          {"connections", census.connections}};
}

// ---------------------------------------------------------------------------

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_orbit_csv(std::ostream& os, const std::vector<PhasePoint>& orbit) {
  os << "n,x,y\n";
  for (std::size_t k = 0; k < orbit.size(); ++k)
    os << k << ',' << format_double(orbit[k].x) << ',' << format_double(orbit[k].y) << '\n';
}

void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPointRecord>& fps) {
  os << "x,y,eigenvalue_1,eigenvalue_2,class\n";
  for (const auto& r : fps)
    os << format_double(r.location.x) << ',' << format_double(r.location.y) << ','
       << format_double(r.eigenvalues[0]) << ',' << format_double(r.eigenvalues[1]) << ','
       << csv_field(to_string(r.stability)) << '\n';
}

void write_trace_csv(std::ostream& os, const std::vector<CycleTrace>& traces) {
  if (traces.empty()) return;
  const std::size_t n = traces.front().start_state.size();
  os << "cycle_index,kicker";
  for (std::size_t i = 1; i <= n; ++i) os << ",psi_" << i;
  os << '\n';
  for (const CycleTrace& t : traces)
    for (const KickEvent& e : t.events) {
      os << e.cycle_index << ',' << e.kicking_clock;
      for (double p : e.phases_after) os << ',' << format_double(p);
      os << '\n';
    }
}

void write_trace_jsonl(std::ostream& os, const std::vector<CycleTrace>& traces) {
  for (const CycleTrace& t : traces)
    for (const KickEvent& e : t.events) os << json(e).dump() << '\n';
}

void write_basin_labels_csv(std::ostream& os, const BasinGrid& grid) {
  for (int j = 0; j < grid.resolution; ++j) {
    for (int i = 0; i < grid.resolution; ++i) {
      if (i) os << ',';
      os << to_string(grid.label(i, j));
    }
    os << '\n';
  }
}

void write_basin_iterations_csv(std::ostream& os, const BasinGrid& grid) {
  for (int j = 0; j < grid.resolution; ++j) {
    for (int i = 0; i < grid.resolution; ++i) {
      if (i) os << ',';
      os << grid.iterations[grid.index(i, j)];
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

template <typename U>
void put_le(std::ostream& os, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t k = 0; k < sizeof(U); ++k)
    bytes[k] = static_cast<char>((value >> (8 * k)) & 0xFFu);
  os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw std::runtime_error("truncated basin grid");
  U value = 0;
  for (std::size_t k = 0; k < sizeof(U); ++k) value |= static_cast<U>(bytes[k]) << (8 * k);
  return value;
}

}  // namespace

void write_basin_binary(std::ostream& os, const BasinGrid& grid) {
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(grid.resolution));
  put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(grid.params.epsilon));
  put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(grid.tol));
  for (BasinLabel l : grid.labels) os.put(static_cast<char>(l));
  for (std::uint32_t n : grid.iterations) put_le<std::uint32_t>(os, n);
}

BasinGrid read_basin_binary(std::istream& is) {
  BasinGrid grid;
  const auto res = get_le<std::uint64_t>(is);
  if (res < 2 || res > (1u << 16)) throw std::runtime_error("basin grid resolution out of range");
  grid.resolution = static_cast<int>(res);
  grid.params.epsilon = std::bit_cast<double>(get_le<std::uint64_t>(is));
  grid.tol = std::bit_cast<double>(get_le<std::uint64_t>(is));
  const std::size_t cells = static_cast<std::size_t>(res * res);
  grid.labels.resize(cells);
  for (auto& l : grid.labels) {
    const auto byte = get_le<std::uint8_t>(is);
    if (byte > static_cast<std::uint8_t>(BasinLabel::unresolved))
      throw std::runtime_error("invalid basin label byte");
    l = static_cast<BasinLabel>(byte);
  }
  grid.iterations.resize(cells);
  for (auto& n : grid.iterations) n = get_le<std::uint32_t>(is);
  return grid;
}

}  // namespace triclock
