#include <sstream>

#include "doctest.h"
#include "triclock/serialize.hpp"

using namespace triclock;

namespace {

CouplingParams with_eps(double e) {
  CouplingParams p;
  p.epsilon = e;
  return p;
}

template <typename T>
T reparse(const T& v) {
  return json::parse(json(v).dump()).get<T>();
}

}  // namespace

TEST_CASE("fixed point records round trip") {
  for (const FixedPointRecord& r : classified_fixed_points(with_eps(0.0731))) {
    const FixedPointRecord back = reparse(r);
    CHECK(back.location == r.location);
    CHECK(back.jacobian == r.jacobian);
    CHECK(back.eigenvalues == r.eigenvalues);
    CHECK(back.eigenvectors[0] == r.eigenvectors[0]);
    CHECK(back.eigenvectors[1] == r.eigenvectors[1]);
    CHECK(back.stability == r.stability);
  }
  const json j = classify({kPi, kPi}, with_eps(0.05));
  CHECK(j.contains("location"));
  CHECK(j.contains("eigenvalues"));
  CHECK(j.at("class") == "saddle");
}

TEST_CASE("coupling params round trip") {
  CouplingParams p;
  p.epsilon = 0.0123456789012345;
  p.mu = 0.125;
  p.h = 1.7;
  p.alpha = 0.3;
  const CouplingParams q = reparse(p);
  CHECK(q.epsilon == p.epsilon);
  CHECK(q.mu == p.mu);
  CHECK(q.h == p.h);
  CHECK(q.alpha == p.alpha);
}

TEST_CASE("segment verification round trip") {
  for (const InvariantSegment& s : invariant_segments()) {
    const SegmentVerification v = verify_invariance(s, with_eps(0.05), 100);
    const SegmentVerification w = reparse(v);
    CHECK(w.name == v.name);
    CHECK(w.samples == v.samples);
    CHECK(w.max_deviation == v.max_deviation);
    CHECK(w.max_restriction_error == v.max_restriction_error);
    CHECK(w.min_derivative == v.min_derivative);
    CHECK(w.passed == v.passed);
    CHECK(w.offending_t == v.offending_t);
  }
  SegmentVerification bad;
  bad.name = SegmentName::c2;
  bad.offending_t = 1.25;
  CHECK(reparse(bad).offending_t == 1.25);
}

TEST_CASE("census and orbits round trip") {
  const HeteroclinicCensus c = heteroclinic_census(with_eps(0.05));
  for (const Connection& k : c.connections) {
    const Connection b = reparse(k);
    CHECK(b.source == k.source);
    CHECK(b.target == k.target);
    CHECK(b.kind == k.kind);
    CHECK(b.via == k.via);
    CHECK(b.source_class == k.source_class);
    CHECK(b.target_class == k.target_class);
  }
  const HeteroclinicOrbit& o = c.traced.front();
  const HeteroclinicOrbit ob = reparse(o);
  CHECK(ob.samples == o.samples);
  CHECK(ob.kind == o.kind);
  CHECK(ob.source.location == o.source.location);

  const json cj = census_to_json(c);
  CHECK(cj.at("counts").at("sa") == 6);
  CHECK(cj.at("counts").at("rs") == 10);
}

TEST_CASE("lyapunov report round trip") {
  const LyapunovReport r = orbital_derivative_scan(Region::lower, with_eps(0.05), 120);
  const LyapunovReport b = reparse(r);
  CHECK(b.region == r.region);
  CHECK(b.grid_resolution == r.grid_resolution);
  CHECK(b.samples == r.samples);
  CHECK(b.max_df == r.max_df);
  CHECK(b.argmax == r.argmax);
  CHECK(b.max_df_away == r.max_df_away);
  CHECK(b.zero_set == r.zero_set);
  CHECK(b.passed == r.passed);
  CHECK(json(r).contains("max_DF"));
}

TEST_CASE("kick events and firing patterns round trip") {
  const CycleTrace t = run_cycle(ClockEnsemble({0.0, 1.3, 4.4}, with_eps(0.05)), 7);
  for (const KickEvent& e : t.events) {
    const KickEvent b = reparse(e);
    CHECK(b.cycle_index == e.cycle_index);
    CHECK(b.kicking_clock == e.kicking_clock);
    CHECK(b.time == e.time);
    CHECK(b.phases_before == e.phases_before);
    CHECK(b.phases_after == e.phases_after);
  }
  const FiringPattern f = firing_pattern(t);
  const FiringPattern g = reparse(f);
  CHECK(g.offsets == f.offsets);
  CHECK(g.order == f.order);
  CHECK(g.gaps == f.gaps);
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_field("") == "");
}

TEST_CASE("doubles print shortest round trip form") {
  for (double v : {0.1, kPi, -1e-300, 1.0 / 3.0, 12345.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("orbit and fixed point csv") {
  std::ostringstream os;
  write_orbit_csv(os, {{0, 0}, {1.5, 2}});
  CHECK(os.str() == "n,x,y\n0,0,0\n1,1.5,2\n");

  std::ostringstream fs;
  write_fixed_points_csv(fs, classified_fixed_points(with_eps(0.05)));
  const std::string s = fs.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 12);
}

TEST_CASE("trace writers") {
  std::vector<CycleTrace> traces{run_cycle(ClockEnsemble({0.0, 1.0, 3.0}, with_eps(0.05)), 0)};
  std::ostringstream csv, jl;
  write_trace_csv(csv, traces);
  write_trace_jsonl(jl, traces);
  CHECK(csv.str().rfind("cycle_index,kicker,psi_1,psi_2,psi_3\n", 0) == 0);
  std::istringstream in(jl.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const KickEvent e = json::parse(line).get<KickEvent>();
    CHECK(e.cycle_index == 0);
    ++n;
  }
  CHECK(n == 3);
}

TEST_CASE("basin csv layout") {
  const BasinGrid g = rasterize(5, with_eps(0.05));
  std::ostringstream os;
  write_basin_labels_csv(os, g);
  std::istringstream in(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("binary basin round trip") {
  const BasinGrid g = rasterize(37, with_eps(0.06));
  std::stringstream buf;
  write_basin_binary(buf, g);
  CHECK(buf.str().size() == 8 + 8 + 8 + 37 * 37 + 4 * 37 * 37);
  const BasinGrid b = read_basin_binary(buf);
  CHECK(b.resolution == 37);
  CHECK(b.params.epsilon == 0.06);
  CHECK(b.tol == g.tol);
  CHECK(b.labels == g.labels);
  CHECK(b.iterations == g.iterations);
}

TEST_CASE("binary basin reader rejects damaged input") {
  const BasinGrid g = rasterize(8, with_eps(0.06));
  std::stringstream buf;
  write_basin_binary(buf, g);
  std::string bytes = buf.str();

  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS(read_basin_binary(truncated));

  std::string bad_label = bytes;
  bad_label[24] = 9;
  std::istringstream bl(bad_label);
  CHECK_THROWS(read_basin_binary(bl));

  std::istringstream empty("");
  CHECK_THROWS(read_basin_binary(empty));
}
