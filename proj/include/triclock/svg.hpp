#pragma once

// SVG 1.1 phase portraits of the three-clock map. Output is a pure function
// of its inputs: fixed number formatting, no timestamps, no generated ids.
// The y axis points up.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triclock/basin.hpp"
#include "triclock/dynamics.hpp"

namespace triclock {

enum class PortraitLayer { basin_background, invariant_segments, sample_orbits, heteroclinics, fixed_points };

std::string_view to_string(PortraitLayer l);
PortraitLayer portrait_layer_from_string(std::string_view s);

struct LayerStyle {
  std::string color;
  double width = 1.0;
};

struct PortraitSpec {
  /// Drawn in enum order regardless of listing order.
  std::vector<PortraitLayer> layers;
  std::map<PortraitLayer, LayerStyle> styling = default_styling();
  int size_px = 600;

  /// Heteroclinics red, invariant segments grey, orbits black.
  static std::map<PortraitLayer, LayerStyle> default_styling();
};

/// Everything a portrait may draw, produced by the analysis modules.
struct PortraitData {
  std::vector<FixedPointRecord> fixed_points;
  std::optional<HeteroclinicCensus> census;
  std::vector<InvariantSegment> segments;
  std::optional<BasinGrid> basins;
  std::vector<std::vector<PhasePoint>> orbits;
};

/// Throws std::invalid_argument for an empty layer list or a layer whose
/// data is missing.
std::string render_portrait(const PortraitSpec& spec, const PortraitData& data);

/// Basin picture with both attractors marked.
std::string render_basins(const BasinGrid& grid, int size_px = 600);

}  // namespace triclock
