#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "triclock/basin.hpp"
#include "triclock/cli.hpp"
#include "triclock/dynamics.hpp"
#include "triclock/event_sim.hpp"
#include "triclock/parallel.hpp"
#include "triclock/phase_core.hpp"
#include "triclock/serialize.hpp"
#include "triclock/svg.hpp"

namespace triclock::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
  }
  return p;
}

/// Writes to the configured file, or to `fallback` when no path is set.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false) : os_(&fallback) {
    if (path.empty()) return;
    path_ = resolve_output(path);
    auto mode = std::ios::out | std::ios::trunc;
    if (binary) mode |= std::ios::binary;
    file_ = std::make_unique<std::ofstream>(path_, mode);
    if (!*file_) throw IoError("cannot open output file " + path_.string());
    os_ = file_.get();
  }

  std::ostream& stream() { return *os_; }
  bool to_file() const { return file_ != nullptr; }
  const std::filesystem::path& path() const { return path_; }

  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw IoError("failed writing " + path_.string());
  }

 private:
  std::ostream* os_;
  std::unique_ptr<std::ofstream> file_;
  std::filesystem::path path_;
};

double to_radians(const RunConfig& c, double v) { return c.degrees ? v * kPi / 180.0 : v; }

CouplingParams coupling(const RunConfig& c) {
  CouplingParams p;
  p.epsilon = c.epsilon;
  p.mu = c.mu;
  p.h = c.h;
  p.alpha = c.alpha;
  return p;
}

CouplingParams analysis_coupling(const RunConfig& c) {
  CouplingParams p = coupling(c);
  try {
    p.validate_for_analysis();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) +
                     " (analysis needs 1e-8 <= epsilon < epsilon_0 = 1/9)");
  }
  return p;
}

std::string pick_format(const RunConfig& c, std::string fallback,
                        std::initializer_list<const char*> allowed) {
  const std::string f = c.format.empty() ? std::move(fallback) : c.format;
  for (const char* a : allowed)
    if (f == a) return f;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw UsageError("format '" + f + "' not supported by this command (use " + list + ")");
}

std::string fixed(double v, int prec = 10) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(prec) << v;
  return ss.str();
}

// ---------------------------------------------------------------------------

int cmd_step(const RunConfig& c, std::ostream& out) {
  CouplingParams p = coupling(c);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.count < 0) throw UsageError("-n must be >= 0");
  const PhasePoint start{to_radians(c, *c.x), to_radians(c, *c.y)};
  if (!in_square(start)) throw UsageError("initial point must lie in [0, 2pi]^2");

  const std::string fmt = pick_format(c, "csv", {"csv", "json"});
  std::vector<PhasePoint> pts = orbit(start, p, c.count);
  pts.erase(pts.begin());

  Sink sink(c.output_path, out);
  if (fmt == "csv") {
    auto& os = sink.stream();
    os << "n,x,y\n";
    for (std::size_t k = 0; k < pts.size(); ++k)
      os << k + 1 << ',' << format_double(pts[k].x) << ',' << format_double(pts[k].y) << '\n';
  } else {
    sink.stream() << json{{"epsilon", p.epsilon}, {"start", start}, {"orbit", pts}}.dump(2) << '\n';
  }
  sink.close();
  return kExitOk;
}

int cmd_fixed_points(const RunConfig& c, std::ostream& out) {
  const CouplingParams p = analysis_coupling(c);
  const double tol = c.tol > 0.0 ? c.tol : 1e-12;
  const std::string fmt = pick_format(c, "text", {"text", "csv", "json"});
  const FixedPointSearch found = find_fixed_points(c.seeds, tol, p, resolve_workers(c.workers));

  Sink sink(c.output_path, out);
  auto& os = sink.stream();
  if (fmt == "json") {
    json j{{"epsilon", p.epsilon},
           {"fixed_points", found.roots},
           {"nonconvergent_seeds", found.nonconvergent_seeds}};
    os << j.dump(2) << '\n';
  } else if (fmt == "csv") {
    write_fixed_points_csv(os, found.roots);
  } else {
    std::size_t counts[4] = {0, 0, 0, 0};
    os << "fixed points of F, epsilon = " << p.epsilon << "\n";
    os << std::left << std::setw(15) << "x" << std::setw(15) << "y" << std::setw(16)
       << "eigenvalue_1" << std::setw(16) << "eigenvalue_2" << "class\n";
    for (const auto& r : found.roots) {
      os << std::setw(15) << fixed(r.location.x) << std::setw(15) << fixed(r.location.y)
         << std::setw(16) << fixed(r.eigenvalues[0], 12) << std::setw(16)
         << fixed(r.eigenvalues[1], 12) << to_string(r.stability) << '\n';
      ++counts[static_cast<int>(r.stability)];
    }
    os << found.roots.size() << " fixed points: " << counts[0] << " attractors, " << counts[1]
       << " repellers, " << counts[2] << " saddles";
    if (counts[3]) os << ", " << counts[3] << " non-hyperbolic";
    os << "; " << found.nonconvergent_seeds.size() << " non-convergent seeds\n";
  }
  sink.close();
  return kExitOk;
}

int cmd_basins(const RunConfig& c, std::ostream& out) {
  const CouplingParams p = analysis_coupling(c);
  const std::string fmt = pick_format(c, "csv", {"csv", "bin", "svg", "json"});
  const double tol = c.tol > 0.0 ? c.tol : kBasinTolerance;
  const BasinGrid grid = rasterize(c.resolution, p, tol, c.max_iter, resolve_workers(c.workers));

  Sink sink(c.output_path, out, fmt == "bin");
  auto& os = sink.stream();
  if (fmt == "csv") {
    write_basin_labels_csv(os, grid);
    if (sink.to_file()) {
      const std::filesystem::path iter_path = sink.path().string() + ".iterations.csv";
      std::ofstream it(iter_path);
      if (!it) throw IoError("cannot open output file " + iter_path.string());
      write_basin_iterations_csv(it, grid);
    }
  } else if (fmt == "bin") {
    write_basin_binary(os, grid);
  } else if (fmt == "svg") {
    os << render_basins(grid);
  } else {
    os << json{{"resolution", grid.resolution},
               {"epsilon", p.epsilon},
               {"tol", grid.tol},
               {"max_iter", grid.max_iter},
               {"counts",
                {{"upper", grid.count(BasinLabel::upper)},
                 {"lower", grid.count(BasinLabel::lower)},
                 {"boundary", grid.count(BasinLabel::boundary)},
                 {"unresolved", grid.count(BasinLabel::unresolved)}}}}
              .dump(2)
       << '\n';
  }
  sink.close();
  if (sink.to_file()) {
    out << "basins: resolution " << grid.resolution << ", upper " << grid.count(BasinLabel::upper)
        << ", lower " << grid.count(BasinLabel::lower) << ", boundary "
        << grid.count(BasinLabel::boundary) << ", unresolved "
        << grid.count(BasinLabel::unresolved) << " -> " << sink.path().string() << '\n';
  }
  return kExitOk;
}

std::string order_key(const std::vector<std::size_t>& order) {
  std::string s;
  for (std::size_t k : order) s += (s.empty() ? "" : ",") + std::to_string(k);
  return s;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  if (c.n_clocks < 2) throw UsageError("--n-clocks must be >= 2");
  CouplingParams p = coupling(c);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.max_cycles < 1) throw UsageError("--max-cycles must be >= 1");
  const double tol = c.tol > 0.0 ? c.tol : 1e-10;
  const std::string fmt = pick_format(c, "json", {"json", "text"});
  const auto n = static_cast<std::size_t>(c.n_clocks);

  std::vector<std::vector<double>> starts;
  if (!c.phases.empty()) {
    if (c.phases.size() != n)
      throw UsageError("--phases needs exactly " + std::to_string(n) + " values");
    std::vector<double> ph;
    // only differences matter: shift time so that clock 0 sits at its threshold
    const double ref = to_radians(c, c.phases[0]);
    for (double v : c.phases) ph.push_back(normalize_phase(to_radians(c, v) - ref));
    starts.push_back(std::move(ph));
  } else {
    if (c.starts < 1) throw UsageError("--starts must be >= 1");
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unif(0.0, kTwoPi);
    for (int s = 0; s < c.starts; ++s) {
      std::vector<double> ph{0.0};
      for (std::size_t i = 1; i < n; ++i) ph.push_back(unif(rng));
      starts.push_back(std::move(ph));
    }
  }

  std::vector<LockResult> results(starts.size(), LockResult{ClockEnsemble({0.0, 0.0}, p), 0, false, {}, {}, {}});
  parallel_for(starts.size(), resolve_workers(c.workers), [&](std::size_t s) {
    results[s] = run_until_locked(ClockEnsemble(starts[s], p), tol, static_cast<std::size_t>(c.max_cycles));
  });

  if (!c.trace_path.empty()) {
    if (c.trace_format != "jsonl" && c.trace_format != "csv")
      throw UsageError("--trace-format must be jsonl or csv");
    std::vector<CycleTrace> traces;
    ClockEnsemble state(starts.front(), p);
    for (int k = 0; k < c.trace_cycles; ++k) {
      traces.push_back(run_cycle(state, static_cast<std::size_t>(k)));
      state = traces.back().end_state;
    }
    Sink trace_sink(c.trace_path, out);
    if (c.trace_format == "csv")
      write_trace_csv(trace_sink.stream(), traces);
    else
      write_trace_jsonl(trace_sink.stream(), traces);
    trace_sink.close();
  }

  const double splay_gap = kTwoPi / static_cast<double>(n);
  std::vector<double> splay_offsets;
  for (std::size_t i = 1; i < n; ++i) splay_offsets.push_back(splay_gap * static_cast<double>(i));

  std::size_t locked = 0, near = 0;
  std::map<std::string, std::size_t> orientations;
  json runs = json::array();
  for (std::size_t s = 0; s < results.size(); ++s) {
    const LockResult& r = results[s];
    double gap_err = 0.0;
    for (double g : r.firing.gaps) gap_err = std::max(gap_err, std::abs(g - splay_gap));
    const bool is_near = gap_err < c.splay_tol;
    locked += r.locked;
    near += is_near;
    if (is_near) ++orientations[order_key(r.firing.order)];
    json run = r;
    run["initial_phases"] = starts[s];
    run["max_firing_gap_error"] = gap_err;
    run["near_splay"] = is_near;
    runs.push_back(std::move(run));
  }
  const double fraction = static_cast<double>(near) / static_cast<double>(results.size());

  Sink sink(c.output_path, out);
  auto& os = sink.stream();
  if (fmt == "json") {
    json rep{{"n_clocks", n},
             {"epsilon", p.epsilon},
             {"tol", tol},
             {"max_cycles", c.max_cycles},
             {"starts", results.size()},
             {"locked", locked},
             {"splay_gap", splay_gap},
             {"splay_relative_phases", splay_offsets},
             {"splay_tol", c.splay_tol},
             {"near_splay", near},
             {"near_splay_fraction", fraction},
             {"orientations", orientations},
             {"runs", runs}};
    os << rep.dump(2) << '\n';
  } else {
    os << "clocks " << n << ", epsilon " << p.epsilon << ", starts " << results.size()
       << ", locked " << locked << ", near splay (firing gaps within " << c.splay_tol << " of 2pi/"
       << n << ") " << near << " (fraction " << fraction << ")\n";
    for (const auto& [key, count] : orientations)
      os << "  firing order " << key << ": " << count << '\n';
    for (std::size_t s = 0; s < results.size(); ++s) {
      const LockResult& r = results[s];
      os << "run " << s << ": " << (r.locked ? "locked" : "not locked") << " after " << r.cycles
         << " cycles; relative phases";
      for (double d : r.differences) os << ' ' << fixed(d, 8);
      os << "; firing gaps";
      for (double g : r.firing.gaps) os << ' ' << fixed(g, 8);
      os << '\n';
    }
  }
  sink.close();
  return kExitOk;
}

struct VerifyOutcome {
  json report;
  bool passed = true;
};

VerifyOutcome run_verification(const RunConfig& c, const CouplingParams& p) {
  VerifyOutcome v;
  const unsigned workers = resolve_workers(c.workers);

  // fixed points
  const FixedPointSearch found = find_fixed_points(c.seeds, 1e-12, p, workers);
  const auto known = known_fixed_points();
  bool fp_ok = found.roots.size() == known.size();
  for (const auto& r : found.roots)
    fp_ok = fp_ok && std::any_of(known.begin(), known.end(),
                                 [&](PhasePoint k) { return norm2(r.location - k) < 1e-9; });
  v.report["fixed_points"] = {{"found", found.roots.size()},
                              {"expected", known.size()},
                              {"nonconvergent_seeds", found.nonconvergent_seeds.size()},
                              {"passed", fp_ok}};
  v.passed = v.passed && fp_ok;

  // invariant segments
  json segs = json::array();
  for (const InvariantSegment& s : invariant_segments()) {
    const SegmentVerification sv = verify_invariance(s, p, static_cast<std::size_t>(c.samples));
    v.passed = v.passed && sv.passed;
    segs.push_back(sv);
  }
  v.report["segments"] = segs;

  // restriction fixed points
  struct Expected {
    RestrictionKind kind;
    double lo, hi;
    std::vector<double> roots;
  };
  const std::vector<Expected> expected{
      {RestrictionKind::g, 0.0, kTwoPi, {0.0, kPi, kTwoPi}},
      {RestrictionKind::h1, 0.0, kTwoPi, {0.0, kTwoPi / 3, kPi, 2 * kTwoPi / 3, kTwoPi}},
      {RestrictionKind::h2, 0.0, kTwoPi / 3, {0.0, kTwoPi / 3}}};
  json rfp = json::array();
  for (const Expected& e : expected) {
    const auto roots = restriction_fixed_points(e.kind, e.lo, e.hi);
    bool ok = roots.size() == e.roots.size();
    for (std::size_t i = 0; ok && i < roots.size(); ++i) ok = std::abs(roots[i] - e.roots[i]) < 1e-10;
    v.passed = v.passed && ok;
    rfp.push_back({{"map", to_string(e.kind)}, {"fixed_points", roots}, {"passed", ok}});
  }
  v.report["restriction_fixed_points"] = rfp;

  // heteroclinics
  const HeteroclinicCensus census = heteroclinic_census(p, kHeteroclinicStep, c.max_iter);
  const bool census_ok = census.count(ConnectionKind::sa) == 6 &&
                         census.count(ConnectionKind::rs) == 10 &&
                         census.count(ConnectionKind::ra) >= 2;
  json cj = census_to_json(census);
  cj["passed"] = census_ok;
  v.report["census"] = cj;
  v.passed = v.passed && census_ok;

  // Lyapunov
  json ly = json::array();
  LyapunovScanOptions opts;
  opts.workers = workers;
  for (Region r : {Region::upper, Region::lower}) {
    const LyapunovReport rep = orbital_derivative_scan(r, p, c.grid, opts);
    v.passed = v.passed && rep.passed;
    json j = rep;
    j.erase("zero_set");
    j["zero_set_size"] = rep.zero_set.size();
    ly.push_back(j);
  }
  v.report["lyapunov"] = ly;
  v.report["epsilon"] = p.epsilon;
  v.report["passed"] = v.passed;
  return v;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const CouplingParams p = analysis_coupling(c);
  const std::string fmt = pick_format(c, "text", {"text", "json"});
  const VerifyOutcome v = run_verification(c, p);
  const json& r = v.report;

  Sink sink(c.output_path, out);
  auto& os = sink.stream();
  auto mark = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  if (fmt == "json") {
    os << r.dump(2) << '\n';
  } else {
    os << "verification at epsilon = " << p.epsilon << '\n';
    os << mark(r["fixed_points"]["passed"]) << "  fixed points: " << r["fixed_points"]["found"]
       << " found, " << r["fixed_points"]["expected"] << " expected\n";
    for (const auto& s : r["segments"])
      os << mark(s["passed"]) << "  segment " << s["segment"].get<std::string>()
         << ": max deviation " << s["max_deviation"].get<double>() << ", min r' "
         << s["min_derivative"].get<double>() << '\n';
    for (const auto& f : r["restriction_fixed_points"]) {
      os << mark(f["passed"]) << "  fixed points of " << f["map"].get<std::string>() << ":";
      for (double t : f["fixed_points"]) os << ' ' << fixed(t, 12);
      os << '\n';
    }
    const auto& counts = r["census"]["counts"];
    os << mark(r["census"]["passed"]) << "  heteroclinics: sa " << counts["sa"] << ", rs "
       << counts["rs"] << ", ra " << counts["ra"] << '\n';
    for (const auto& l : r["lyapunov"])
      os << mark(l["passed"]) << "  Lyapunov " << l["region"].get<std::string>() << ": max DF "
         << l["max_DF"].get<double>() << " over " << l["samples"] << " samples, max DF away "
         << l["max_DF_away"].get<double>() << '\n';
    os << (v.passed ? "all checks passed" : "verification FAILED") << '\n';
  }
  sink.close();
  return v.passed ? kExitOk : kExitUsage;
}

int cmd_andronov(const RunConfig& c, std::ostream& out) {
  CouplingParams p = coupling(c);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.steps < 0) throw UsageError("--steps must be >= 0");
  const std::string fmt = pick_format(c, "csv", {"csv", "json", "text"});
  if (!(c.v0 > 4.0 * p.mu))
    throw DomainError("v0 = " + format_double(c.v0) + " is outside the basin (4 mu, inf) = (" +
                      format_double(4.0 * p.mu) + ", inf)");

  const double vf = andronov_fixed_point(p).v;
  std::vector<double> vs{c.v0};
  std::string error;
  try {
    AndronovState s{c.v0};
    for (int k = 0; k < c.steps; ++k) vs.push_back((s = andronov_step(s, p)).v);
  } catch (const DomainError& e) {
    error = e.what();
  }

  Sink sink(c.output_path, out);
  auto& os = sink.stream();
  if (fmt == "json") {
    json rows = json::array();
    for (std::size_t k = 0; k < vs.size(); ++k) rows.push_back({k, vs[k], vs[k] - vf});
    os << json{{"mu", p.mu}, {"h", p.h}, {"v_fixed", vf}, {"rows", rows}}.dump(2) << '\n';
  } else if (fmt == "csv") {
    os << "n,v,v_minus_vf\n";
    for (std::size_t k = 0; k < vs.size(); ++k)
      os << k << ',' << format_double(vs[k]) << ',' << format_double(vs[k] - vf) << '\n';
  } else {
    os << "v_f = " << format_double(vf) << '\n';
    for (std::size_t k = 0; k < vs.size(); ++k)
      os << std::setw(5) << k << "  " << fixed(vs[k], 14) << "  " << std::scientific
         << std::setprecision(3) << (vs[k] - vf) << std::defaultfloat << '\n';
  }
  sink.close();
  if (!error.empty()) throw DomainError(error);
  return kExitOk;
}

int cmd_portrait(const RunConfig& c, std::ostream& out) {
  const CouplingParams p = analysis_coupling(c);
  pick_format(c, "svg", {"svg"});

  PortraitSpec spec;
  if (c.layers.empty()) {
    spec.layers = {PortraitLayer::basin_background, PortraitLayer::invariant_segments,
                   PortraitLayer::sample_orbits, PortraitLayer::heteroclinics,
                   PortraitLayer::fixed_points};
  } else {
    for (const auto& l : c.layers) {
      try {
        spec.layers.push_back(portrait_layer_from_string(l));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  const auto has = [&](PortraitLayer l) {
    return std::find(spec.layers.begin(), spec.layers.end(), l) != spec.layers.end();
  };

  const unsigned workers = resolve_workers(c.workers);
  PortraitData data;
  if (has(PortraitLayer::fixed_points)) data.fixed_points = classified_fixed_points(p);
  if (has(PortraitLayer::heteroclinics)) data.census = heteroclinic_census(p);
  if (has(PortraitLayer::invariant_segments)) data.segments = invariant_segments();
  if (has(PortraitLayer::basin_background))
    data.basins = rasterize(c.resolution, p, c.tol > 0.0 ? c.tol : kBasinTolerance, c.max_iter, workers);
  if (has(PortraitLayer::sample_orbits)) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unif(0.05, kTwoPi - 0.05);
    const int len = default_max_iterations(p.epsilon);
    for (int k = 0; k < c.orbits; ++k) {
      const PhasePoint start{unif(rng), unif(rng)};
      data.orbits.push_back(orbit(start, p, len));
    }
    if (data.orbits.empty()) throw UsageError("--orbits must be >= 1 for the sample_orbits layer");
  }

  Sink sink(c.output_path, out);
  sink.stream() << render_portrait(spec, data);
  sink.close();
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* sub, RunConfig& c, bool coupling_only = false) {
  sub->add_option("--eps,--epsilon", c.epsilon, "coupling strength epsilon");
  if (!coupling_only) {
    sub->add_option("--mu", c.mu, "dry friction coefficient");
    sub->add_option("--kick", c.h, "kick velocity scale h");
    sub->add_option("--alpha", c.alpha, "interaction constant (informational)");
  }
  sub->add_option("-o,--output", c.output_path, "output file (default: standard output)");
  sub->add_option("--format", c.format, "output format");
  sub->add_option("--config", "flat key = value file; command-line flags take precedence");
  sub->add_flag("--deg", c.degrees, "angles given in degrees");
  sub->add_option("--workers", c.workers, "worker threads, 0 = all cores");
}

// True if the command line sets the option under any of its names.
bool user_set(const std::vector<std::string>& args, const CLI::Option& opt) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    for (const std::string& l : opt.get_lnames()) {
      const std::string flag = "--" + l;
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    for (const std::string& s : opt.get_snames())
      if (a.rfind("-" + s, 0) == 0 && a.rfind("--", 0) != 0) return true;
    return false;
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-difference dynamics of three impact-coupled identical clocks", "triclock"};
  app.require_subcommand(1);
  RunConfig c;

  auto* step = app.add_subcommand("step", "iterate the three-clock map from one point");
  add_common(step, c, true);
  step->add_option("--x", c.x, "lag of clock B behind A")->required();
  step->add_option("--y", c.y, "lag of clock C behind A")->required();
  step->add_option("-n,--count", c.count, "number of iterations");

  auto* fps = app.add_subcommand("fixed-points", "locate and classify the fixed points");
  add_common(fps, c, true);
  fps->add_option("--seeds", c.seeds, "Newton seed grid points per side");
  fps->add_option("--tol", c.tol, "residual tolerance (default 1e-12)");

  auto* basins = app.add_subcommand("basins", "rasterize the basins of attraction");
  add_common(basins, c, true);
  basins->add_option("--resolution", c.resolution, "cells per side");
  basins->add_option("--tol", c.tol, "convergence tolerance (default 1e-6)");
  basins->add_option("--max-iter", c.max_iter, "iteration cap (default ceil(60/eps))");

  auto* sim = app.add_subcommand("simulate", "event-driven simulation of N kicked clocks");
  add_common(sim, c, true);
  sim->add_option("--n-clocks", c.n_clocks, "number of clocks");
  sim->add_option("--phases", c.phases, "initial phases, comma separated")->delimiter(',');
  sim->add_option("--starts", c.starts, "number of random starts when --phases is absent");
  sim->add_option("--seed", c.seed, "random seed");
  sim->add_option("--max-cycles", c.max_cycles, "cycle cap per start");
  sim->add_option("--tol", c.tol, "lock tolerance (default 1e-10)");
  sim->add_option("--splay-tol", c.splay_tol, "firing-gap tolerance for the splay report");
  sim->add_option("--trace", c.trace_path, "write kick events of the first start here");
  sim->add_option("--trace-format", c.trace_format, "jsonl or csv");
  sim->add_option("--trace-cycles", c.trace_cycles, "cycles to trace");

  auto* verify = app.add_subcommand("verify", "check invariant sets, heteroclinics and Lyapunov functions");
  add_common(verify, c, true);
  verify->add_option("--samples", c.samples, "samples per invariant segment");
  verify->add_option("--grid", c.grid, "Lyapunov lattice cells per side");
  verify->add_option("--seeds", c.seeds, "Newton seed grid points per side");
  verify->add_option("--max-iter", c.max_iter, "heteroclinic iteration cap (default ceil(60/eps))");

  auto* andro = app.add_subcommand("andronov", "iterate the isolated-clock return map");
  add_common(andro, c);
  andro->add_option("--v0", c.v0, "initial velocity at the section");
  andro->add_option("--steps", c.steps, "number of steps");

  auto* portrait = app.add_subcommand("portrait", "render an SVG phase portrait");
  add_common(portrait, c, true);
  portrait->add_option("--layers", c.layers,
                       "comma separated subset of basin_background, invariant_segments, "
                       "sample_orbits, heteroclinics, fixed_points")
      ->delimiter(',');
  portrait->add_option("--resolution", c.resolution, "basin background cells per side");
  portrait->add_option("--tol", c.tol, "basin convergence tolerance");
  portrait->add_option("--max-iter", c.max_iter, "basin iteration cap");
  portrait->add_option("--orbits", c.orbits, "number of sample orbits");
  portrait->add_option("--seed", c.seed, "seed for sample orbit starts");

  try {
    // Splice config-file settings in front of the user's flags.
    std::vector<std::string> full = args;
    const auto sub_it = std::find_if(full.begin(), full.end(),
                                     [](const std::string& a) { return !a.empty() && a[0] != '-'; });
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty() && sub_it != full.end()) {
      CLI::App* sub = app.get_subcommand_no_throw(*sub_it);
      if (sub == nullptr) throw UsageError("unknown subcommand " + *sub_it);
      std::map<std::string, std::string> settings;
      try {
        settings = parse_config_file(config_path);
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      std::vector<std::string> injected;
      for (const auto& [key, value] : settings) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config")
          throw UsageError("config key '" + key + "' is not an option of " + sub->get_name());
        if (user_set(args, *opt)) continue;
        if (opt->get_expected_min() == 0) {
          if (value == "true" || value == "1") injected.push_back("--" + key);
        } else {
          injected.push_back("--" + key);
          injected.push_back(value);
        }
      }
      full.insert(sub_it + 1, injected.begin(), injected.end());
    }

    std::vector<std::string> reversed(full.rbegin(), full.rend());
    app.parse(reversed);

    if (*step) return cmd_step(c, out);
    if (*fps) return cmd_fixed_points(c, out);
    if (*basins) return cmd_basins(c, out);
    if (*sim) return cmd_simulate(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*andro) return cmd_andronov(c, out);
    if (*portrait) return cmd_portrait(c, out);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CycleError& e) {
    err << "simulation error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace triclock::cli
