#pragma once

// Maps for three identical clocks coupled through a common support:
// the impact perturbation, the isolated-clock return map, the two-clock
// phase map and the three-clock phase-difference map with its Jacobian.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace triclock {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Upper bound on the coupling under which every analysis result holds.
inline constexpr double kEpsilonBound = 1.0 / 9.0;
/// Below this the map is numerically the identity and nothing is hyperbolic.
inline constexpr double kMinAnalysisEpsilon = 1e-8;

/// Map coordinates closer than this to 0 or 2*pi are snapped onto the edge.
inline constexpr double kBoundarySnap = 1e-14;

inline constexpr double kFixedPointTolerance = 1e-10;
inline constexpr double kIdentityTolerance = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double norm_inf(Vec2 v) { return std::max(std::abs(v.x), std::abs(v.y)); }
inline double norm2(Vec2 v) { return std::hypot(v.x, v.y); }

/// Row-major 2x2 matrix.
struct Mat2 {
  double a = 0.0, b = 0.0;
  double c = 0.0, d = 0.0;

  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// A point of the square S = [0, 2pi]^2 of phase differences.
/// x is the lag of clock B behind A, y the lag of clock C behind A.
/// The square is closed: its edges are invariant and never wrapped.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;

  Vec2 vec() const { return {x, y}; }
  PhasePoint swapped() const { return {y, x}; }
  friend bool operator==(PhasePoint, PhasePoint) = default;
};

inline PhasePoint operator+(PhasePoint p, Vec2 v) { return {p.x + v.x, p.y + v.y}; }
inline Vec2 operator-(PhasePoint p, PhasePoint q) { return {p.x - q.x, p.y - q.y}; }

/// Is the point inside the closed square, up to `slack`?
bool in_square(PhasePoint p, double slack = 0.0);

/// Representative of an angle in [0, 2pi).
double normalize_phase(double phase);

/// Wrapped distance between two angles, in [0, pi].
double circular_distance(double a, double b);

/// Coupling strength plus the physical constants it summarizes.
///
/// Only `epsilon` enters the phase maps. `mu`, `h` and `alpha` drive the
/// isolated-clock return map and are otherwise kept for reference; the
/// natural frequency is fixed at 1 so every period is 2pi.
struct CouplingParams {
  double epsilon = 0.05;
  double mu = 0.1;
  double h = 1.0;
  double alpha = 0.0;
  double omega = 1.0;

  /// Throws std::invalid_argument unless epsilon >= 0, mu > 0, h > 0, alpha >= 0.
  void validate() const;

  /// validate() plus kMinAnalysisEpsilon <= epsilon < kEpsilonBound.
  void validate_for_analysis() const;
};

/// Raised when a state leaves the domain on which a map is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// P(phi) = epsilon * sin(phi): phase jump a kick imposes on another clock.
double perturbation(double phi, const CouplingParams& params);

/// Velocity at the Poincare section of a single friction clock.
struct AndronovState {
  double v = 0.0;
};

/// v -> sqrt((v - 4 mu)^2 + h^2). Throws DomainError when v <= 4 mu,
/// where the clock stops before reaching the section again.
AndronovState andronov_step(AndronovState state, const CouplingParams& params);

/// The attracting fixed point v_f = h^2 / (8 mu) + 2 mu.
AndronovState andronov_fixed_point(const CouplingParams& params);

/// Two-clock phase difference update phi -> phi + epsilon sin(phi), in [0, 2pi).
double adler_step(double phi, const CouplingParams& params);

/// Unscaled vector field (phi, gamma) of the three-clock map.
Vec2 omega_field(PhasePoint p);

/// F(p) = p + epsilon * Omega(p), edge coordinates snapped onto the boundary.
PhasePoint three_clock_step(PhasePoint p, const CouplingParams& params);

/// Closed-form Jacobian of F.
Mat2 jacobian(PhasePoint p, const CouplingParams& params);

}  // namespace triclock
