#include "triclock/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "triclock/parallel.hpp"

namespace triclock {

namespace {

constexpr double kThirdTwoPi = kTwoPi / 3.0;
constexpr double kTwoThirdsTwoPi = 2.0 * kTwoPi / 3.0;
constexpr double kHyperbolicGap = 1e-10;
// Converged roots this close to an edge are the edge root itself.
constexpr double kEdgeSnap = 1e-9;

double snap_root_coordinate(double c) {
  if (c < -kEdgeSnap || c > kTwoPi + kEdgeSnap) c = normalize_phase(c);
  if (std::abs(c) < kEdgeSnap) return 0.0;
  if (std::abs(c - kTwoPi) < kEdgeSnap) return kTwoPi;
  return c;
}

// Jacobian of Omega (not of F).
Mat2 omega_jacobian(PhasePoint p) {
  const double cx = std::cos(p.x);
  const double cy = std::cos(p.y);
  const double cxy = std::cos(p.x - p.y);
  return {2.0 * cx + cxy, cy - cxy, cx - cxy, cxy + 2.0 * cy};
}

struct NewtonResult {
  PhasePoint root;
  bool converged = false;
};

NewtonResult damped_newton(PhasePoint seed, double tol, int max_iterations) {
  PhasePoint p = seed;
  Vec2 f = omega_field(p);
  double r = norm_inf(f);
  for (int it = 0; it < max_iterations && !(r < tol); ++it) {
    const Mat2 j = omega_jacobian(p);
    const double det = j.det();
    if (std::abs(det) < 1e-14) return {p, false};
    // s = -J^{-1} f
    const Vec2 s{-(j.d * f.x - j.b * f.y) / det, -(-j.c * f.x + j.a * f.y) / det};
    double lambda = 1.0;
    PhasePoint next = p + s;
    Vec2 fn = omega_field(next);
    while (norm_inf(fn) >= r && lambda > 1.0 / 1024.0) {
      lambda *= 0.5;
      next = p + lambda * s;
      fn = omega_field(next);
    }
    p = next;
    f = fn;
    r = norm_inf(f);
  }
  return {p, r < tol};
}

std::array<double, 2> eigenvalues_2x2(const Mat2& m) {
  const double mean = 0.5 * (m.a + m.d);
  const double half_diff = 0.5 * (m.a - m.d);
  double disc = half_diff * half_diff + m.b * m.c;
  if (disc < 0.0) {
    if (disc > -1e-24) {
      disc = 0.0;
    } else {
      throw std::runtime_error("Jacobian has complex eigenvalues at this point");
    }
  }
  const double root = std::sqrt(disc);
  return {mean + root, mean - root};
}

Vec2 eigenvector_2x2(const Mat2& m, double lambda, Vec2 fallback) {
  const Vec2 from_row0{m.b, lambda - m.a};
  const Vec2 from_row1{lambda - m.d, m.c};
  const Vec2 v = norm2(from_row0) >= norm2(from_row1) ? from_row0 : from_row1;
  const double n = norm2(v);
  if (n < 1e-13 * (1.0 + std::abs(lambda))) return fallback;
  return (1.0 / n) * v;
}

}  // namespace

std::string_view to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::attractor: return "attractor";
    case StabilityClass::repeller: return "repeller";
    case StabilityClass::saddle: return "saddle";
    case StabilityClass::non_hyperbolic: return "non-hyperbolic";
  }
  return "?";
}

StabilityClass stability_class_from_string(std::string_view s) {
  for (auto c : {StabilityClass::attractor, StabilityClass::repeller, StabilityClass::saddle,
                 StabilityClass::non_hyperbolic})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown stability class: " + std::string(s));
}

std::optional<Vec2> FixedPointRecord::unstable_direction() const {
  for (std::size_t i = 0; i < 2; ++i)
    if (std::abs(eigenvalues[i]) > 1.0 + kHyperbolicGap) return eigenvectors[i];
  return std::nullopt;
}

std::vector<PhasePoint> known_fixed_points() {
  return {
      {kPi, kPi},
      {kThirdTwoPi, kTwoThirdsTwoPi},
      {kTwoThirdsTwoPi, kThirdTwoPi},
      {0.0, 0.0},
      {0.0, kTwoPi},
      {kTwoPi, 0.0},
      {kTwoPi, kTwoPi},
      {0.0, kPi},
      {kTwoPi, kPi},
      {kPi, 0.0},
      {kPi, kTwoPi},
  };
}

FixedPointRecord classify(PhasePoint fp, const CouplingParams& params) {
  const double residual = norm_inf(omega_field(fp));
  if (!(residual < kFixedPointTolerance))
    throw std::invalid_argument("point is not a fixed point: ||Omega|| = " +
                                std::to_string(residual));
  FixedPointRecord rec;
  rec.location = fp;
  rec.jacobian = jacobian(fp, params);
  rec.eigenvalues = eigenvalues_2x2(rec.jacobian);
  rec.eigenvectors = {eigenvector_2x2(rec.jacobian, rec.eigenvalues[0], {1.0, 0.0}),
                      eigenvector_2x2(rec.jacobian, rec.eigenvalues[1], {0.0, 1.0})};

  const double m0 = std::abs(rec.eigenvalues[0]);
  const double m1 = std::abs(rec.eigenvalues[1]);
  if (std::abs(m0 - 1.0) < kHyperbolicGap || std::abs(m1 - 1.0) < kHyperbolicGap)
    rec.stability = StabilityClass::non_hyperbolic;
  else if (m0 < 1.0 && m1 < 1.0)
    rec.stability = StabilityClass::attractor;
  else if (m0 > 1.0 && m1 > 1.0)
    rec.stability = StabilityClass::repeller;
  else
    rec.stability = StabilityClass::saddle;
  return rec;
}

std::vector<FixedPointRecord> classified_fixed_points(const CouplingParams& params) {
  params.validate_for_analysis();
  std::vector<FixedPointRecord> out;
  for (PhasePoint p : known_fixed_points()) out.push_back(classify(p, params));
  return out;
}

FixedPointSearch find_fixed_points(int seed_grid, double tol, const CouplingParams& params,
                                   unsigned workers, NewtonOptions options) {
  params.validate_for_analysis();
  if (seed_grid < 2) throw std::invalid_argument("seed grid must have at least 2 points per side");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");

  const std::size_t n = static_cast<std::size_t>(seed_grid);
  std::vector<PhasePoint> seeds(n * n);
  std::vector<NewtonResult> results(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      seeds[j * n + i] = {kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1),
                          kTwoPi * static_cast<double>(j) / static_cast<double>(n - 1)};

  parallel_for(seeds.size(), workers, [&](std::size_t k) {
    NewtonResult r = damped_newton(seeds[k], tol, options.max_iterations);
    if (r.converged) {
      r.root = {snap_root_coordinate(r.root.x), snap_root_coordinate(r.root.y)};
      r.converged = norm_inf(omega_field(r.root)) < tol;
    }
    results[k] = r;
  });

  FixedPointSearch out;
  std::vector<PhasePoint> roots;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (!results[k].converged) {
      out.nonconvergent_seeds.push_back(seeds[k]);
      continue;
    }
    const PhasePoint r = results[k].root;
    const bool seen = std::any_of(roots.begin(), roots.end(), [&](PhasePoint q) {
      return norm2(r - q) < options.dedup_radius;
    });
    if (!seen) roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](PhasePoint a, PhasePoint b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  for (PhasePoint r : roots) out.roots.push_back(classify(r, params));
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(SegmentName n) {
  switch (n) {
    case SegmentName::s0: return "s0";
    case SegmentName::s1: return "s1";
    case SegmentName::r0: return "r0";
    case SegmentName::r1: return "r1";
    case SegmentName::diagonal: return "diagonal";
    case SegmentName::antidiagonal: return "antidiagonal";
    case SegmentName::d1: return "d1";
    case SegmentName::c1: return "c1";
    case SegmentName::c2: return "c2";
    case SegmentName::d2: return "d2";
  }
  return "?";
}

SegmentName segment_name_from_string(std::string_view s) {
  for (const auto& seg : invariant_segments())
    if (to_string(seg.name) == s) return seg.name;
  throw std::invalid_argument("unknown segment name: " + std::string(s));
}

std::string_view to_string(RestrictionKind k) {
  switch (k) {
    case RestrictionKind::g: return "g";
    case RestrictionKind::h1: return "h1";
    case RestrictionKind::h2: return "h2";
  }
  return "?";
}

double restriction_displacement(RestrictionKind k, double t) {
  switch (k) {
    case RestrictionKind::g: return 3.0 * std::sin(t);
    case RestrictionKind::h1: return std::sin(t) + std::sin(2.0 * t);
    case RestrictionKind::h2: return 2.0 * std::sin(t) - 2.0 * std::sin(0.5 * t);
  }
  return 0.0;
}

double restriction_map(RestrictionKind k, double t, double epsilon) {
  return t + epsilon * restriction_displacement(k, t);
}

double restriction_derivative(RestrictionKind k, double t, double epsilon) {
  switch (k) {
    case RestrictionKind::g: return 1.0 + 3.0 * epsilon * std::cos(t);
    case RestrictionKind::h1: return 1.0 + epsilon * (std::cos(t) + 2.0 * std::cos(2.0 * t));
    case RestrictionKind::h2: return 1.0 + epsilon * (2.0 * std::cos(t) - std::cos(0.5 * t));
  }
  return 1.0;
}

double restriction_derivative_lower_bound(double epsilon) { return 1.0 - 3.0 * epsilon; }

std::vector<double> restriction_fixed_points(RestrictionKind k, double lo, double hi) {
  constexpr int kScan = 4096;
  constexpr double kEndpointZero = 1e-12;
  auto d = [k](double t) { return restriction_displacement(k, t); };

  std::vector<double> roots;
  auto add = [&roots](double t) {
    if (roots.empty() || std::abs(t - roots.back()) > 1e-9) roots.push_back(t);
  };

  if (std::abs(d(lo)) < kEndpointZero) add(lo);
  double t0 = lo;
  double d0 = d(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double t1 = i == kScan ? hi : lo + (hi - lo) * i / kScan;
    const double d1 = d(t1);
    const bool endpoint = i == kScan && std::abs(d1) < kEndpointZero;
    if (!endpoint && ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0))) {
      double a = t0, b = t1, da = d0;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        const double dm = d(m);
        if (dm == 0.0) {
          a = b = m;
          break;
        }
        if ((dm < 0.0) == (da < 0.0)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      add(0.5 * (a + b));
    } else if (d1 == 0.0 && !endpoint) {
      add(t1);
    }
    t0 = t1;
    d0 = d1;
  }
  if (std::abs(d(hi)) < kEndpointZero) add(hi);
  return roots;
}

double InvariantSegment::parameter_of(PhasePoint p) const {
  const Vec2 r = p - base;
  return (r.x * direction.x + r.y * direction.y) /
         (direction.x * direction.x + direction.y * direction.y);
}

double InvariantSegment::distance_to_line(PhasePoint p) const {
  const Vec2 r = p - base;
  return std::abs(r.x * direction.y - r.y * direction.x) / norm2(direction);
}

std::vector<InvariantSegment> invariant_segments() {
  using enum SegmentName;
  using enum RestrictionKind;
  return {
      {s0, {0.0, 0.0}, {0.0, 1.0}, 0.0, kTwoPi, g},
      {s1, {kTwoPi, 0.0}, {0.0, 1.0}, 0.0, kTwoPi, g},
      {r0, {0.0, 0.0}, {1.0, 0.0}, 0.0, kTwoPi, g},
      {r1, {0.0, kTwoPi}, {1.0, 0.0}, 0.0, kTwoPi, g},
      {diagonal, {0.0, 0.0}, {1.0, 1.0}, 0.0, kTwoPi, g},
      {antidiagonal, {0.0, kTwoPi}, {1.0, -1.0}, 0.0, kTwoPi, h1},
      // y = pi + x/2 on [0, 2pi/3]
      {d1, {0.0, kPi}, {1.0, 0.5}, 0.0, kThirdTwoPi, h2},
      // y = 2x on [2pi/3, pi]
      {c1, {0.0, 0.0}, {1.0, 2.0}, kThirdTwoPi, kPi, h1},
      // y = 2(x - pi) on [pi, 4pi/3]
      {c2, {0.0, -kTwoPi}, {1.0, 2.0}, kPi, kTwoThirdsTwoPi, h1},
      // y = x/2 on [4pi/3, 2pi], parameterized by t = 2pi - x
      {d2, {kTwoPi, kPi}, {-1.0, -0.5}, 0.0, kThirdTwoPi, h2},
  };
}

SegmentVerification verify_invariance(const InvariantSegment& seg, const CouplingParams& params,
                                      std::size_t samples) {
  params.validate_for_analysis();
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");

  SegmentVerification out;
  out.name = seg.name;
  out.samples = samples;
  out.min_derivative = std::numeric_limits<double>::infinity();
  out.increasing = true;

  constexpr double kDeviationTol = 1e-12;
  double prev_image = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = i + 1 == samples
                         ? seg.t_max
                         : seg.t_min + (seg.t_max - seg.t_min) * static_cast<double>(i) /
                                           static_cast<double>(samples - 1);
    const PhasePoint image = three_clock_step(seg.point(t), params);
    const double dev = seg.distance_to_line(image);
    const double rt = restriction_map(seg.restriction, t, params.epsilon);
    const double param_err = std::abs(seg.parameter_of(image) - rt);
    const bool inside = rt >= seg.t_min - kDeviationTol && rt <= seg.t_max + kDeviationTol;

    if ((dev >= kDeviationTol || param_err >= kDeviationTol || !inside) && !out.offending_t)
      out.offending_t = t;
    out.max_deviation = std::max(out.max_deviation, dev);
    out.max_restriction_error = std::max(out.max_restriction_error, param_err);

    const double deriv = restriction_derivative(seg.restriction, t, params.epsilon);
    out.min_derivative = std::min(out.min_derivative, deriv);
    if (!(rt > prev_image) || !(deriv > 0.0)) {
      out.increasing = false;
      if (!out.offending_t) out.offending_t = t;
    }
    prev_image = rt;
  }
  out.passed = out.increasing && !out.offending_t;
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::sa: return "sa";
    case ConnectionKind::rs: return "rs";
    case ConnectionKind::ra: return "ra";
    case ConnectionKind::other: return "other";
  }
  return "?";
}

ConnectionKind connection_kind_from_string(std::string_view s) {
  for (auto k : {ConnectionKind::sa, ConnectionKind::rs, ConnectionKind::ra, ConnectionKind::other})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown connection kind: " + std::string(s));
}

ConnectionKind connection_kind(StabilityClass source, StabilityClass target) {
  using enum StabilityClass;
  if (source == saddle && target == attractor) return ConnectionKind::sa;
  if (source == repeller && target == saddle) return ConnectionKind::rs;
  if (source == repeller && target == attractor) return ConnectionKind::ra;
  return ConnectionKind::other;
}

int default_max_iterations(double epsilon) {
  return static_cast<int>(std::ceil(60.0 / epsilon));
}

HeteroclinicOrbit trace_heteroclinic(const FixedPointRecord& source, Vec2 direction,
                                     const CouplingParams& params, double step, int max_iter,
                                     const std::vector<FixedPointRecord>& targets) {
  params.validate_for_analysis();
  if (source.stability != StabilityClass::saddle && source.stability != StabilityClass::repeller)
    throw std::invalid_argument("heteroclinic tracing starts from a saddle or a repeller");
  const double len = norm2(direction);
  if (!(len > 0.0) || !(step > 0.0))
    throw std::invalid_argument("direction and step must be non-zero");

  PhasePoint p = source.location + (step / len) * direction;
  if (!in_square(p)) throw TraceError("seed point lies outside S");

  HeteroclinicOrbit orbit;
  orbit.source = source;
  orbit.samples.push_back(p);
  for (int it = 0;; ++it) {
    for (const FixedPointRecord& t : targets) {
      if (norm2(t.location - source.location) < 1e-12) continue;
      if (norm2(p - t.location) < kArrivalRadius) {
        orbit.target = t;
        orbit.kind = connection_kind(source.stability, t.stability);
        return orbit;
      }
    }
    if (it == max_iter) break;
    p = three_clock_step(p, params);
    if (!in_square(p)) throw TraceError("orbit left S, contradicting its invariance");
    orbit.samples.push_back(p);
  }
  throw TraceError("no fixed point reached within " + std::to_string(max_iter) +
                   " iterations from (" + std::to_string(source.location.x) + ", " +
                   std::to_string(source.location.y) + ")");
}

HeteroclinicOrbit trace_heteroclinic(const FixedPointRecord& source, Vec2 direction,
                                     const CouplingParams& params, double step, int max_iter) {
  return trace_heteroclinic(source, direction, params, step, max_iter,
                            classified_fixed_points(params));
}

std::size_t HeteroclinicCensus::count(ConnectionKind k) const {
  return static_cast<std::size_t>(std::count_if(
      connections.begin(), connections.end(), [k](const Connection& c) { return c.kind == k; }));
}

HeteroclinicCensus heteroclinic_census(const CouplingParams& params, double step, int max_iter) {
  params.validate_for_analysis();
  if (max_iter <= 0) max_iter = default_max_iterations(params.epsilon);
  const std::vector<FixedPointRecord> fps = classified_fixed_points(params);

  HeteroclinicCensus census;
  auto add = [&census](Connection c) {
    const bool dup = std::any_of(
        census.connections.begin(), census.connections.end(), [&](const Connection& o) {
          return norm2(o.source - c.source) < 1e-9 && norm2(o.target - c.target) < 1e-9;
        });
    if (!dup) census.connections.push_back(std::move(c));
  };

  for (const FixedPointRecord& fp : fps) {
    if (fp.stability != StabilityClass::saddle) continue;
    const Vec2 u = *fp.unstable_direction();
    for (double sign : {1.0, -1.0}) {
      const Vec2 dir = sign * u;
      if (!in_square(fp.location + step * dir)) continue;
      HeteroclinicOrbit orbit = trace_heteroclinic(fp, dir, params, step, max_iter, fps);
      add({orbit.source.location, orbit.target.location, orbit.source.stability,
           orbit.target.stability, orbit.kind, "trace"});
      census.traced.push_back(std::move(orbit));
    }
  }

  auto record_at = [&fps](PhasePoint p) -> const FixedPointRecord& {
    for (const FixedPointRecord& fp : fps)
      if (norm2(fp.location - p) < 1e-8) return fp;
    throw std::logic_error("restriction fixed point is not a fixed point of F");
  };

  for (const InvariantSegment& seg : invariant_segments()) {
    const std::vector<double> ts = restriction_fixed_points(seg.restriction, seg.t_min, seg.t_max);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      const double mid = 0.5 * (ts[i] + ts[i + 1]);
      const bool forward = restriction_displacement(seg.restriction, mid) > 0.0;
      const FixedPointRecord& from = record_at(seg.point(forward ? ts[i] : ts[i + 1]));
      const FixedPointRecord& to = record_at(seg.point(forward ? ts[i + 1] : ts[i]));
      add({from.location, to.location, from.stability, to.stability,
           connection_kind(from.stability, to.stability), std::string(to_string(seg.name))});
    }
  }
  return census;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Region r) { return r == Region::upper ? "upper" : "lower"; }

Region region_from_string(std::string_view s) {
  if (s == "upper" || s == "S_U" || s == "U") return Region::upper;
  if (s == "lower" || s == "S_D" || s == "D") return Region::lower;
  throw std::invalid_argument("unknown region: " + std::string(s));
}

PhasePoint region_attractor(Region r) {
  return r == Region::upper ? PhasePoint{kThirdTwoPi, kTwoThirdsTwoPi}
                            : PhasePoint{kTwoThirdsTwoPi, kThirdTwoPi};
}

std::vector<PhasePoint> region_fixed_points(Region r) {
  std::vector<PhasePoint> out;
  for (PhasePoint p : known_fixed_points())
    if (in_region(p, r, 0.0)) out.push_back(p);
  return out;
}

bool in_region(PhasePoint p, Region r, double slack) {
  if (!in_square(p, slack)) return false;
  return r == Region::upper ? p.y >= p.x - slack : p.x >= p.y - slack;
}

double lyapunov_value(PhasePoint p, Region r) {
  if (!in_region(p, r))
    throw DomainError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") is outside the " + std::string(to_string(r)) + " triangle");
  const PhasePoint c = region_attractor(r);
  const double a = p.x - c.x;
  const double b = p.y - c.y;
  return a * a + b * b - a * b;
}

double orbital_derivative(PhasePoint p, Region r, const CouplingParams& params) {
  const PhasePoint c = region_attractor(r);
  const double e = params.epsilon;
  const Vec2 w = omega_field(p);
  const double a = p.x - c.x;
  const double b = p.y - c.y;
  const double sxy = std::sin(p.x - p.y);
  const double quad = w.x * w.x + w.y * w.y - w.x * w.y;
  // 2 phi - gamma = 3 (sin x + sin(x - y)), 2 gamma - phi = 3 (sin y - sin(x - y))
  const double lin = 3.0 * (a * (std::sin(p.x) + sxy) + b * (std::sin(p.y) - sxy));
  return e * e * quad + e * lin;
}

LyapunovReport orbital_derivative_scan(Region r, const CouplingParams& params, int grid,
                                       LyapunovScanOptions options) {
  params.validate_for_analysis();
  if (grid < 100) throw std::invalid_argument("Lyapunov grid needs at least 100 cells per side");

  const std::size_t n = static_cast<std::size_t>(grid);
  const double cell = kTwoPi / grid;
  const std::vector<PhasePoint> fixed = region_fixed_points(r);
  auto coord = [&](std::size_t i) {
    return i == n ? kTwoPi : kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
  };

  struct RowResult {
    std::size_t samples = 0;
    double max_df = -std::numeric_limits<double>::infinity();
    PhasePoint argmax;
    double max_df_away = -std::numeric_limits<double>::infinity();
    std::vector<PhasePoint> zeros;
  };
  std::vector<RowResult> rows(n + 1);

  parallel_for(n + 1, options.workers, [&](std::size_t j) {
    RowResult& row = rows[j];
    for (std::size_t i = 0; i <= n; ++i) {
      const bool inside = r == Region::upper ? j >= i : i >= j;
      if (!inside) continue;
      const PhasePoint p{coord(i), coord(j)};
      const double df = orbital_derivative(p, r, params);
      ++row.samples;
      if (df > row.max_df) {
        row.max_df = df;
        row.argmax = p;
      }
      const bool away = std::all_of(fixed.begin(), fixed.end(), [&](PhasePoint f) {
        return norm2(p - f) > options.exclusion_radius;
      });
      if (away) row.max_df_away = std::max(row.max_df_away, df);
      if (std::abs(df) < options.zero_tol) row.zeros.push_back(p);
    }
  });

  LyapunovReport rep;
  rep.region = r;
  rep.grid_resolution = grid;
  rep.epsilon = params.epsilon;
  rep.exclusion_radius = options.exclusion_radius;
  rep.max_df = -std::numeric_limits<double>::infinity();
  rep.max_df_away = -std::numeric_limits<double>::infinity();
  for (const RowResult& row : rows) {
    rep.samples += row.samples;
    if (row.max_df > rep.max_df) {
      rep.max_df = row.max_df;
      rep.argmax = row.argmax;
    }
    rep.max_df_away = std::max(rep.max_df_away, row.max_df_away);
    rep.zero_set.insert(rep.zero_set.end(), row.zeros.begin(), row.zeros.end());
  }

  const bool zeros_at_fixed_points =
      std::all_of(rep.zero_set.begin(), rep.zero_set.end(), [&](PhasePoint z) {
        return std::any_of(fixed.begin(), fixed.end(),
                           [&](PhasePoint f) { return norm_inf(z - f) <= 2.0 * cell; });
      });
  rep.passed = rep.max_df <= options.nonpositive_tol && zeros_at_fixed_points;
  return rep;
}

}  // namespace triclock
