#include "triclock/phase_core.hpp"

#include <string>

namespace triclock {

bool in_square(PhasePoint p, double slack) {
  return p.x >= -slack && p.x <= kTwoPi + slack && p.y >= -slack &&
         p.y <= kTwoPi + slack;
}

double normalize_phase(double phase) {
  double r = std::fmod(phase, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round back up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circular_distance(double a, double b) {
  const double d = normalize_phase(a - b);
  return std::min(d, kTwoPi - d);
}

void CouplingParams::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("coupling epsilon must be a finite value >= 0, got " +
                                std::to_string(epsilon));
  if (!(mu > 0.0)) throw std::invalid_argument("friction mu must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("kick scale h must be > 0");
  if (!(alpha >= 0.0)) throw std::invalid_argument("interaction alpha must be >= 0");
}

void CouplingParams::validate_for_analysis() const {
  validate();
  if (epsilon < kMinAnalysisEpsilon)
    throw std::invalid_argument(
        "epsilon below 1e-8: the map is the identity to working precision and "
        "no fixed point is hyperbolic");
  if (epsilon >= kEpsilonBound)
    throw std::invalid_argument("epsilon must satisfy epsilon < epsilon_0 = 1/9, got " +
                                std::to_string(epsilon));
}

double perturbation(double phi, const CouplingParams& params) {
  return params.epsilon * std::sin(phi);
}

AndronovState andronov_step(AndronovState state, const CouplingParams& params) {
  const double shifted = state.v - 4.0 * params.mu;
  if (!(shifted > 0.0))
    throw DomainError("velocity " + std::to_string(state.v) +
                      " <= 4 mu: the clock stops before the next kick");
  return {std::hypot(shifted, params.h)};
}

AndronovState andronov_fixed_point(const CouplingParams& params) {
  return {params.h * params.h / (8.0 * params.mu) + 2.0 * params.mu};
}

double adler_step(double phi, const CouplingParams& params) {
  return normalize_phase(phi + perturbation(phi, params));
}

Vec2 omega_field(PhasePoint p) {
  const double sx = std::sin(p.x);
  const double sy = std::sin(p.y);
  // Written so that gamma(x, y) and phi(y, x) round identically.
  const double phi = 2.0 * sx + sy + std::sin(p.x - p.y);
  const double gamma = sx + 2.0 * sy + std::sin(p.y - p.x);
  return {phi, gamma};
}

namespace {

double snap_to_edge(double c) {
  if (std::abs(c) < kBoundarySnap) return 0.0;
  if (std::abs(c - kTwoPi) < kBoundarySnap) return kTwoPi;
  return c;
}

}  // namespace

PhasePoint three_clock_step(PhasePoint p, const CouplingParams& params) {
  const Vec2 w = omega_field(p);
  return {snap_to_edge(p.x + params.epsilon * w.x),
          snap_to_edge(p.y + params.epsilon * w.y)};
}

Mat2 jacobian(PhasePoint p, const CouplingParams& params) {
  const double e = params.epsilon;
  const double cx = std::cos(p.x);
  const double cy = std::cos(p.y);
  const double cxy = std::cos(p.x - p.y);
  return {1.0 + e * (2.0 * cx + cxy), e * (cy - cxy),
          e * (cx - cxy), 1.0 + e * (cxy + 2.0 * cy)};
}

}  // namespace triclock
