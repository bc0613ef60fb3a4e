#pragma once

// Basins of attraction of the three-clock map over S.

#include <cstdint>
#include <string_view>
#include <vector>

#include "triclock/phase_core.hpp"

namespace triclock {

/// Stored as one byte per cell in the binary grid layout.
enum class BasinLabel : std::uint8_t { upper = 0, lower = 1, boundary = 2, unresolved = 3 };

std::string_view to_string(BasinLabel l);
BasinLabel basin_label_from_string(std::string_view s);
/// Label of the mirrored cell under (x, y) -> (y, x).
BasinLabel mirror(BasinLabel l);

inline constexpr double kBasinTolerance = 1e-6;
/// |x - y| below this counts as lying on the main diagonal.
inline constexpr double kDiagonalBand = 1e-13;

struct PointClass {
  BasinLabel label = BasinLabel::unresolved;
  std::uint32_t iterations = 0;
};

/// Iterates F until the orbit is within `tol` (max-norm) of one of the two
/// attractors, or lies on the invariant set made of the edges of S and the
/// main diagonal, or `max_iter` steps have been taken.
PointClass classify_point(PhasePoint p, const CouplingParams& params, double tol, int max_iter);

struct BasinGrid {
  int resolution = 0;
  CouplingParams params;
  double tol = kBasinTolerance;
  int max_iter = 0;
  /// Row-major, row j holds the cells with center y = (j + 1/2) * 2pi / resolution.
  std::vector<BasinLabel> labels;
  std::vector<std::uint32_t> iterations;

  double cell_size() const;
  PhasePoint cell_center(int i, int j) const;
  BasinLabel label(int i, int j) const { return labels[index(i, j)]; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(resolution) +
           static_cast<std::size_t>(i);
  }
  std::size_t count(BasinLabel l) const;
};

/// Classifies every cell center. `max_iter` <= 0 selects ceil(60 / eps).
/// The result does not depend on `workers`.
BasinGrid rasterize(int resolution, const CouplingParams& params, double tol = kBasinTolerance,
                    int max_iter = 0, unsigned workers = 1);

/// p, F(p), ..., F^n(p).
std::vector<PhasePoint> orbit(PhasePoint p, const CouplingParams& params, int n);

}  // namespace triclock
