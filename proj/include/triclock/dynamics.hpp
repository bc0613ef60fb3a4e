#pragma once

// Global analysis of the three-clock map F on S = [0, 2pi]^2: fixed points
// and their linear stability, invariant straight segments with their 1-D
// restriction maps, heteroclinic connections, and Lyapunov functions for
// the two attractors.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triclock/phase_core.hpp"

namespace triclock {

enum class StabilityClass { attractor, repeller, saddle, non_hyperbolic };

std::string_view to_string(StabilityClass c);
StabilityClass stability_class_from_string(std::string_view s);

struct FixedPointRecord {
  PhasePoint location;
  Mat2 jacobian;
  /// Sorted in decreasing order.
  std::array<double, 2> eigenvalues{};
  /// Unit eigenvectors matching `eigenvalues`.
  std::array<Vec2, 2> eigenvectors{};
  StabilityClass stability = StabilityClass::non_hyperbolic;

  /// Eigenvector of the eigenvalue above 1, if there is one.
  std::optional<Vec2> unstable_direction() const;
};

/// The eleven closed-form fixed points: three interior, four corners and
/// four edge midpoints.
std::vector<PhasePoint> known_fixed_points();

struct NewtonOptions {
  int max_iterations = 50;
  double residual_tol = 1e-12;
  double dedup_radius = 1e-6;
};

struct FixedPointSearch {
  /// Deduplicated roots, sorted by (x, y).
  std::vector<FixedPointRecord> roots;
  /// Seeds from which the damped Newton iteration did not converge.
  std::vector<PhasePoint> nonconvergent_seeds;
};

/// Damped Newton on Omega from a seed_grid x seed_grid lattice spanning S
/// (edges included). Roots are wrapped back into S by periodicity. Requires
/// a valid analysis epsilon.
FixedPointSearch find_fixed_points(int seed_grid, double tol, const CouplingParams& params,
                                   unsigned workers = 1, NewtonOptions options = {});

/// Closed-form 2x2 eigen-decomposition of the Jacobian at a fixed point.
/// Eigenvalues within 1e-10 of modulus 1 give StabilityClass::non_hyperbolic.
/// Throws std::invalid_argument if ||Omega(fp)|| exceeds 1e-10.
FixedPointRecord classify(PhasePoint fp, const CouplingParams& params);

/// classify() applied to known_fixed_points().
std::vector<FixedPointRecord> classified_fixed_points(const CouplingParams& params);

// ---------------------------------------------------------------------------
// Invariant segments

enum class SegmentName { s0, s1, r0, r1, diagonal, antidiagonal, d1, c1, c2, d2 };

std::string_view to_string(SegmentName n);
SegmentName segment_name_from_string(std::string_view s);

/// 1-D dynamics on an invariant segment.
///   g(t)  = t + 3 eps sin t                 (edges and main diagonal)
///   h1(t) = t + eps sin t + eps sin 2t      (anti-diagonal, c1, c2)
///   h2(t) = t + 2 eps sin t - 2 eps sin t/2 (d1, and d2 in mirrored form)
enum class RestrictionKind { g, h1, h2 };

std::string_view to_string(RestrictionKind k);

double restriction_map(RestrictionKind k, double t, double epsilon);
double restriction_derivative(RestrictionKind k, double t, double epsilon);
/// (r(t) - t) / epsilon, evaluated without cancellation.
double restriction_displacement(RestrictionKind k, double t);
/// 1 - 3 eps bounds every restriction derivative from below.
double restriction_derivative_lower_bound(double epsilon);

/// Zeros of r(t) - t on [lo, hi], ascending, located to ~1e-15.
std::vector<double> restriction_fixed_points(RestrictionKind k, double lo, double hi);

struct InvariantSegment {
  SegmentName name;
  /// point(t) = base + t * direction, for t in [t_min, t_max].
  PhasePoint base;
  Vec2 direction;
  double t_min = 0.0;
  double t_max = 0.0;
  RestrictionKind restriction = RestrictionKind::g;

  PhasePoint point(double t) const { return base + t * direction; }
  /// Parameter of the orthogonal projection of p onto the line.
  double parameter_of(PhasePoint p) const;
  double distance_to_line(PhasePoint p) const;
};

/// The ten invariant segments s0, s1, r0, r1, the two diagonals, d1, c1, c2, d2.
std::vector<InvariantSegment> invariant_segments();

struct SegmentVerification {
  SegmentName name;
  std::size_t samples = 0;
  /// Largest distance from F(point(t)) to the segment's line.
  double max_deviation = 0.0;
  /// Largest |parameter_of(F(point(t))) - r(t)|.
  double max_restriction_error = 0.0;
  /// Smallest sampled r'(t).
  double min_derivative = 0.0;
  bool increasing = false;
  bool passed = false;
  std::optional<double> offending_t;
};

/// Samples the segment uniformly (endpoints included) and checks that F maps
/// it into itself to 1e-12 and that its restriction map strictly increases.
SegmentVerification verify_invariance(const InvariantSegment& seg, const CouplingParams& params,
                                      std::size_t samples = 1000);

// ---------------------------------------------------------------------------
// Heteroclinic connections

/// sa: saddle -> attractor, rs: repeller -> saddle, ra: repeller -> attractor.
enum class ConnectionKind { sa, rs, ra, other };

std::string_view to_string(ConnectionKind k);
ConnectionKind connection_kind_from_string(std::string_view s);
ConnectionKind connection_kind(StabilityClass source, StabilityClass target);

struct HeteroclinicOrbit {
  FixedPointRecord source;
  FixedPointRecord target;
  ConnectionKind kind = ConnectionKind::other;
  /// Forward orbit from the seed point to the first iterate near the target.
  std::vector<PhasePoint> samples;
};

inline constexpr double kHeteroclinicStep = 1e-6;
inline constexpr double kArrivalRadius = 1e-6;

/// Thrown when a traced orbit leaves S or reaches no fixed point.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seeds at source + step * unit(direction) and iterates F until the orbit
/// is within 1e-6 of a fixed point of `targets` other than the source.
HeteroclinicOrbit trace_heteroclinic(const FixedPointRecord& source, Vec2 direction,
                                     const CouplingParams& params, double step, int max_iter,
                                     const std::vector<FixedPointRecord>& targets);

/// Same, with the classified closed-form fixed points as targets.
HeteroclinicOrbit trace_heteroclinic(const FixedPointRecord& source, Vec2 direction,
                                     const CouplingParams& params, double step, int max_iter);

struct Connection {
  PhasePoint source;
  PhasePoint target;
  StabilityClass source_class;
  StabilityClass target_class;
  ConnectionKind kind;
  /// "trace" for orbits grown from a saddle, otherwise the segment name.
  std::string via;
};

struct HeteroclinicCensus {
  /// Connections unique by endpoint pair, traced ones first.
  std::vector<Connection> connections;
  std::vector<HeteroclinicOrbit> traced;
  std::size_t count(ConnectionKind k) const;
};

/// Traces every saddle's unstable manifold in both directions (branches whose
/// seed leaves S are dropped) and reads the remaining connections off the
/// restriction dynamics of the invariant segments.
HeteroclinicCensus heteroclinic_census(const CouplingParams& params,
                                       double step = kHeteroclinicStep, int max_iter = 0);

/// Default iteration cap ceil(60 / eps).
int default_max_iterations(double epsilon);

// ---------------------------------------------------------------------------
// Lyapunov functions

/// upper: the triangle y >= x holding (2pi/3, 4pi/3); lower: its mirror.
enum class Region { upper, lower };

std::string_view to_string(Region r);
Region region_from_string(std::string_view s);

PhasePoint region_attractor(Region r);
/// Closed-form fixed points lying in the closed triangle.
std::vector<PhasePoint> region_fixed_points(Region r);
bool in_region(PhasePoint p, Region r, double slack = 1e-12);

/// V(p) = a^2 + b^2 - a b with (a, b) = p - attractor.
/// Throws DomainError if p is outside the closed region.
double lyapunov_value(PhasePoint p, Region r);

/// DF(p) = V(F(p)) - V(p), expanded as
///   eps^2 (phi^2 + gamma^2 - phi gamma) + 3 eps (a (sin x + sin(x-y)) + b (sin y - sin(x-y))).
double orbital_derivative(PhasePoint p, Region r, const CouplingParams& params);

struct LyapunovScanOptions {
  double nonpositive_tol = 1e-12;
  double zero_tol = 1e-12;
  /// Points this close to a fixed point are excluded from max_df_away.
  double exclusion_radius = 0.1;
  unsigned workers = 1;
};

struct LyapunovReport {
  Region region = Region::upper;
  int grid_resolution = 0;
  double epsilon = 0.0;
  std::size_t samples = 0;
  double max_df = 0.0;
  PhasePoint argmax;
  /// Largest DF over samples farther than exclusion_radius from every
  /// fixed point of the closed region.
  double max_df_away = 0.0;
  double exclusion_radius = 0.0;
  /// Samples with |DF| < zero_tol.
  std::vector<PhasePoint> zero_set;
  bool passed = false;
};

/// Evaluates DF on the lattice (i, j) * 2pi / grid restricted to the closed
/// triangle, grid >= 100. Passes iff max DF <= nonpositive_tol and every near-zero sample
/// lies within two lattice cells of a fixed point of the region.
LyapunovReport orbital_derivative_scan(Region r, const CouplingParams& params, int grid,
                                       LyapunovScanOptions options = {});

}  // namespace triclock
