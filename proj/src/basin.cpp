#include "triclock/basin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "triclock/dynamics.hpp"
#include "triclock/parallel.hpp"

namespace triclock {

std::string_view to_string(BasinLabel l) {
  switch (l) {
    case BasinLabel::upper: return "upper";
    case BasinLabel::lower: return "lower";
    case BasinLabel::boundary: return "boundary";
    case BasinLabel::unresolved: return "unresolved";
  }
  return "?";
}

BasinLabel basin_label_from_string(std::string_view s) {
  for (auto l : {BasinLabel::upper, BasinLabel::lower, BasinLabel::boundary, BasinLabel::unresolved})
    if (to_string(l) == s) return l;
  throw std::invalid_argument("unknown basin label: " + std::string(s));
}

BasinLabel mirror(BasinLabel l) {
  if (l == BasinLabel::upper) return BasinLabel::lower;
  if (l == BasinLabel::lower) return BasinLabel::upper;
  return l;
}

namespace {

bool on_invariant_boundary(PhasePoint p) {
  return p.x == 0.0 || p.x == kTwoPi || p.y == 0.0 || p.y == kTwoPi ||
         std::abs(p.x - p.y) < kDiagonalBand;
}

}  // namespace

PointClass classify_point(PhasePoint p, const CouplingParams& params, double tol, int max_iter) {
  const PhasePoint up = region_attractor(Region::upper);
  const PhasePoint down = region_attractor(Region::lower);
  for (int it = 0;; ++it) {
    const auto iters = static_cast<std::uint32_t>(it);
    if (on_invariant_boundary(p)) return {BasinLabel::boundary, iters};
    if (norm_inf(p - up) < tol) return {BasinLabel::upper, iters};
    if (norm_inf(p - down) < tol) return {BasinLabel::lower, iters};
    if (it >= max_iter) return {BasinLabel::unresolved, iters};
    p = three_clock_step(p, params);
  }
}

double BasinGrid::cell_size() const { return kTwoPi / resolution; }

PhasePoint BasinGrid::cell_center(int i, int j) const {
  const double h = cell_size();
  return {(i + 0.5) * h, (j + 0.5) * h};
}

std::size_t BasinGrid::count(BasinLabel l) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
}

BasinGrid rasterize(int resolution, const CouplingParams& params, double tol, int max_iter,
                    unsigned workers) {
  params.validate_for_analysis();
  if (resolution < 2) throw std::invalid_argument("basin resolution must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("basin tolerance must be > 0");
  if (max_iter <= 0) max_iter = default_max_iterations(params.epsilon);

  BasinGrid grid;
  grid.resolution = resolution;
  grid.params = params;
  grid.tol = tol;
  grid.max_iter = max_iter;
  const std::size_t cells = static_cast<std::size_t>(resolution) * resolution;
  grid.labels.assign(cells, BasinLabel::unresolved);
  grid.iterations.assign(cells, 0);

  parallel_for(static_cast<std::size_t>(resolution), workers, [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < resolution; ++i) {
      const PointClass pc = classify_point(grid.cell_center(i, j), params, tol, max_iter);
      grid.labels[grid.index(i, j)] = pc.label;
      grid.iterations[grid.index(i, j)] = pc.iterations;
    }
  });
  return grid;
}

std::vector<PhasePoint> orbit(PhasePoint p, const CouplingParams& params, int n) {
  if (n < 0) throw std::invalid_argument("orbit length must be >= 0");
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(p);
  for (int k = 0; k < n; ++k) out.push_back(p = three_clock_step(p, params));
  return out;
}

}  // namespace triclock
