#pragma once

// JSON, CSV and binary encodings of the analysis results.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "triclock/basin.hpp"
#include "triclock/dynamics.hpp"
#include "triclock/event_sim.hpp"
#include "triclock/phase_core.hpp"

namespace triclock {

using nlohmann::json;

void to_json(json& j, const Vec2& v);
void from_json(const json& j, Vec2& v);
void to_json(json& j, const PhasePoint& p);
void from_json(const json& j, PhasePoint& p);
void to_json(json& j, const Mat2& m);
void from_json(const json& j, Mat2& m);
void to_json(json& j, const CouplingParams& p);
void from_json(const json& j, CouplingParams& p);
void to_json(json& j, const FixedPointRecord& r);
void from_json(const json& j, FixedPointRecord& r);
void to_json(json& j, const SegmentVerification& s);
void from_json(const json& j, SegmentVerification& s);
void to_json(json& j, const Connection& c);
void from_json(const json& j, Connection& c);
void to_json(json& j, const HeteroclinicOrbit& o);
void from_json(const json& j, HeteroclinicOrbit& o);
void to_json(json& j, const LyapunovReport& r);
void from_json(const json& j, LyapunovReport& r);
void to_json(json& j, const KickEvent& e);
void from_json(const json& j, KickEvent& e);
void to_json(json& j, const FiringPattern& f);
void from_json(const json& j, FiringPattern& f);
void to_json(json& j, const LockResult& r);

/// Census summary: counts by kind plus the connection list.
json census_to_json(const HeteroclinicCensus& census);

// ---------------------------------------------------------------------------
// CSV (RFC 4180 quoting)

/// Quotes a field when it holds a comma, a double quote or a line break.
std::string csv_field(std::string_view s);
/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// Header "n,x,y", one row per orbit point.
void write_orbit_csv(std::ostream& os, const std::vector<PhasePoint>& orbit);
/// Header "x,y,eigenvalue_1,eigenvalue_2,class".
void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPointRecord>& fps);
/// Header "cycle_index,kicker,psi_1,...,psi_N"; phases after each kick.
void write_trace_csv(std::ostream& os, const std::vector<CycleTrace>& traces);
/// One KickEvent per line.
void write_trace_jsonl(std::ostream& os, const std::vector<CycleTrace>& traces);

/// `resolution` rows of `resolution` labels, row j = cells at y index j.
void write_basin_labels_csv(std::ostream& os, const BasinGrid& grid);
/// Same layout with iteration counts.
void write_basin_iterations_csv(std::ostream& os, const BasinGrid& grid);

// ---------------------------------------------------------------------------
// Binary basin grid, little-endian:
//   u64 resolution, f64 epsilon, f64 tol,
//   resolution^2 label bytes (row-major),
//   resolution^2 u32 iteration counts.

void write_basin_binary(std::ostream& os, const BasinGrid& grid);
/// Throws std::runtime_error on truncated or malformed input. max_iter is
/// not part of the layout and reads back as 0.
BasinGrid read_basin_binary(std::istream& is);

}  // namespace triclock
