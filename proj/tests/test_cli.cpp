#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "triclock/cli.hpp"
#include "triclock/phase_core.hpp"

using namespace triclock;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<double> csv_numbers(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("triclock_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config text parsing") {
  const auto m = cli::parse_config_text("# comment\n\neps = 0.07\nformat = \"json\" # trailing\nn=3 # note\n");
  CHECK(m.at("eps") == "0.07");
  CHECK(m.at("format") == "json");
  CHECK(m.at("n") == "3");
  CHECK_THROWS_AS(cli::parse_config_text("novalue\n"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_config_text(" = 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_config_text("a = \"open\n"), std::invalid_argument);
}

TEST_CASE("step near the attractor stays put") {
  const Result r = run_cli({"step", "--x", "2.0944", "--y", "4.1888", "--eps", "0.05", "-n", "10"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 11);
  CHECK(ls[0] == "n,x,y");
  for (std::size_t k = 1; k < ls.size(); ++k) {
    const auto v = csv_numbers(ls[k]);
    CHECK(v[0] == static_cast<double>(k));
    CHECK(std::abs(v[1] - 2.0944) < 1e-4);
    CHECK(std::abs(v[2] - 4.1888) < 1e-4);
  }
}

TEST_CASE("step single iterate") {
  const Result r = run_cli({"step", "--x", "1.5708", "--y", "4.7124", "--eps", "0.01", "-n", "1"});
  REQUIRE(r.code == 0);
  const auto v = csv_numbers(lines(r.out).at(1));
  CHECK(v[1] == doctest::Approx(1.5808).epsilon(1e-5));
  CHECK(v[2] == doctest::Approx(4.7024).epsilon(1e-5));

  const Result j = run_cli({"step", "--x", "1", "--y", "2", "--format", "json", "-n", "2"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc.at("orbit").size() == 2);
}

TEST_CASE("step in degrees") {
  const Result r = run_cli({"step", "--x", "120", "--y", "240", "--deg"});
  REQUIRE(r.code == 0);
  const auto v = csv_numbers(lines(r.out).at(1));
  CHECK(v[1] == doctest::Approx(kTwoPi / 3).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(2 * kTwoPi / 3).epsilon(1e-14));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({"step", "--x", "1"}).code == 2);
  CHECK(run_cli({"step", "--x", "one", "--y", "2"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"wobble"}).code == 2);
  CHECK(run_cli({"step", "--x", "1", "--y", "2", "--format", "svg"}).code == 2);
  CHECK(run_cli({"simulate", "--n-clocks", "1"}).code == 2);
  CHECK(run_cli({"simulate", "--phases", "0,1", "--n-clocks", "3"}).code == 2);
  CHECK(run_cli({"portrait", "--layers", "clouds"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("fixed point table") {
  const Result r = run_cli({"fixed-points", "--eps", "0.05"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("11 fixed points: 2 attractors, 4 repellers, 5 saddles") != std::string::npos);

  const Result j = run_cli({"fixed-points", "--eps", "0.05", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  REQUIRE(doc.at("fixed_points").size() == 11);
  for (const auto& fp : doc.at("fixed_points")) {
    CHECK(fp.contains("location"));
    CHECK(fp.contains("eigenvalues"));
    CHECK(fp.contains("class"));
  }

  const Result c = run_cli({"fixed-points", "--eps", "0.05", "--format", "csv"});
  CHECK(lines(c.out).size() == 12);
}

TEST_CASE("analysis commands refuse epsilon out of range") {
  const Result r = run_cli({"fixed-points", "--eps", "0.2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("1/9") != std::string::npos);
  CHECK(run_cli({"verify", "--eps", "0.0"}).code == 2);
  CHECK(run_cli({"basins", "--eps", "0.12", "--resolution", "4"}).code == 2);
  // simulation accepts it
  CHECK(run_cli({"step", "--x", "1", "--y", "2", "--eps", "0.2"}).code == 0);
}

TEST_CASE("basins outputs") {
  TempDir tmp;
  const fs::path csv = tmp.path / "b.csv";
  const Result r = run_cli({"basins", "--eps", "0.05", "--resolution", "200", "-o", csv.string(), "--workers", "4"});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 200);
  std::size_t upper = 0, lower = 0;
  for (const auto& row : rows) {
    CHECK(std::count(row.begin(), row.end(), ',') == 199);
    std::istringstream in(row);
    for (std::string cell; std::getline(in, cell, ',');) {
      upper += cell == "upper";
      lower += cell == "lower";
    }
  }
  CHECK(upper > 0);
  CHECK(std::abs(static_cast<double>(upper) - static_cast<double>(lower)) <= 0.01 * upper);
  CHECK(fs::exists(tmp.path / "b.csv.iterations.csv"));

  const fs::path svg = tmp.path / "b.svg";
  REQUIRE(run_cli({"basins", "--resolution", "50", "--format", "svg", "-o", svg.string()}).code == 0);
  const std::string s = slurp(svg);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("#9ecae1") != std::string::npos);
  CHECK(s.find("#fdd0a2") != std::string::npos);

  const fs::path bin = tmp.path / "b.bin";
  REQUIRE(run_cli({"basins", "--resolution", "20", "--format", "bin", "-o", bin.string()}).code == 0);
  CHECK(fs::file_size(bin) == 24 + 20 * 20 * 5);

  const Result j = run_cli({"basins", "--resolution", "30", "--format", "json"});
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out).at("counts").at("unresolved") == 0);
}

TEST_CASE("unwritable output exits with 1") {
  CHECK(run_cli({"basins", "--resolution", "4", "-o", "/nonexistent-dir/x/b.csv"}).code == 1);
  CHECK(run_cli({"step", "--x", "1", "--y", "2", "-o", "/nonexistent-dir/x/s.csv"}).code == 1);
  CHECK(run_cli({"step", "--x", "1", "--y", "2", "--config", "/nonexistent-dir/c.toml"}).code == 1);
}

TEST_CASE("relative output goes to the configured directory") {
  TempDir tmp;
  ::setenv(cli::kOutputDirEnv, tmp.path.c_str(), 1);
  const Result r = run_cli({"step", "--x", "1", "--y", "2", "-o", "orbit.csv"});
  ::unsetenv(cli::kOutputDirEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(tmp.path / "orbit.csv"));
}

TEST_CASE("config file values yield to flags") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "run.toml";
  std::ofstream(cfg) << "# settings\nepsilon = 0.01\ncount = 3\n";
  const Result a = run_cli({"step", "--config", cfg.string(), "--x", "1.5708", "--y", "4.7124"});
  REQUIRE(a.code == 0);
  CHECK(lines(a.out).size() == 4);
  CHECK(csv_numbers(lines(a.out).at(1))[1] == doctest::Approx(1.5808).epsilon(1e-5));

  const Result b = run_cli({"step", "--config", cfg.string(), "--x", "1.5708", "--y", "4.7124", "--eps", "0.05", "-n", "1"});
  REQUIRE(b.code == 0);
  CHECK(lines(b.out).size() == 2);
  CHECK(csv_numbers(lines(b.out).at(1))[1] == doctest::Approx(1.5708 + 0.05).epsilon(1e-4));

  std::ofstream(cfg) << "colour = red\n";
  CHECK(run_cli({"step", "--config", cfg.string(), "--x", "1", "--y", "2"}).code == 2);
}

TEST_CASE("simulate lock reports") {
  const Result a = run_cli({"simulate", "--phases", "0,2.0,4.0", "--eps", "0.05"});
  REQUIRE(a.code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  const auto& run = ja.at("runs").at(0);
  CHECK(run.at("locked") == true);
  CHECK(run.at("near_splay") == true);
  CHECK(run.at("max_firing_gap_error").get<double>() < 1e-6);

  const Result b = run_cli({"simulate", "--phases", "0,1,1", "--eps", "0.05"});
  REQUIRE(b.code == 0);
  const auto d = nlohmann::json::parse(b.out).at("runs").at(0).at("differences");
  CHECK(std::abs(d.at(0).get<double>() - kPi) < 1e-6);
  CHECK(d.at(0) == d.at(1));

  const Result c = run_cli({"simulate", "--n-clocks", "5", "--eps", "0.02", "--starts", "3", "--seed", "9"});
  REQUIRE(c.code == 0);
  const auto jc = nlohmann::json::parse(c.out);
  CHECK(jc.at("runs").size() == 3);
  CHECK(jc.at("runs").at(0).at("differences").size() == 4);
  CHECK(jc.contains("near_splay_fraction"));
}

TEST_CASE("simulate traces") {
  TempDir tmp;
  const fs::path jl = tmp.path / "t.jsonl";
  REQUIRE(run_cli({"simulate", "--phases", "0,2,4", "--trace", jl.string(), "--trace-cycles", "2"}).code == 0);
  CHECK(lines(slurp(jl)).size() == 6);
  const fs::path cs = tmp.path / "t.csv";
  REQUIRE(run_cli({"simulate", "--phases", "0,2,4", "--trace", cs.string(), "--trace-format", "csv"}).code == 0);
  CHECK(lines(slurp(cs)).at(0) == "cycle_index,kicker,psi_1,psi_2,psi_3");
}

TEST_CASE("simulate is reproducible for any worker count") {
  const Result a = run_cli({"simulate", "--starts", "20", "--seed", "4", "--workers", "1"});
  const Result b = run_cli({"simulate", "--starts", "20", "--seed", "4", "--workers", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("verify") {
  const Result a = run_cli({"verify", "--eps", "0.05"});
  CHECK(a.code == 0);
  CHECK(a.out.find("sa 6, rs 10, ra 2") != std::string::npos);
  CHECK(a.out.find("FAIL") == std::string::npos);
  CHECK(run_cli({"verify", "--eps", "0.1"}).code == 0);
  const Result j = run_cli({"verify", "--eps", "0.05", "--format", "json"});
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out).at("passed") == true);
}

TEST_CASE("andronov table") {
  const Result a = run_cli({"andronov", "--mu", "0.1", "--kick", "1", "--v0", "5", "--steps", "200"});
  REQUIRE(a.code == 0);
  const auto ls = lines(a.out);
  CHECK(csv_numbers(ls.back())[1] == doctest::Approx(1.45).epsilon(1e-12));

  const Result b = run_cli({"andronov", "--mu", "0.1", "--v0", "1.45", "--steps", "5"});
  REQUIRE(b.code == 0);
  for (std::size_t k = 1; k < lines(b.out).size(); ++k)
    CHECK(csv_numbers(lines(b.out)[k])[1] == doctest::Approx(1.45).epsilon(1e-14));

  const Result c = run_cli({"andronov", "--mu", "0.1", "--v0", "0.4"});
  CHECK(c.code == 2);
  CHECK(c.err.find("domain") != std::string::npos);
}

TEST_CASE("portrait is a deterministic byte stream") {
  const std::vector<std::string> args{"portrait", "--eps", "0.05", "--resolution", "40", "--orbits", "4"};
  const Result a = run_cli(args);
  const Result b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("<?xml", 0) == 0);
  for (const char* id : {"basin_background", "invariant_segments", "sample_orbits", "heteroclinics", "fixed_points"})
    CHECK(a.out.find(std::string("<g id=\"") + id + "\"") != std::string::npos);
  CHECK(a.out.find("#d62728") != std::string::npos);
  CHECK(a.out.find("#1f77b4") != std::string::npos);

  const Result c = run_cli({"portrait", "--layers", "fixed_points"});
  REQUIRE(c.code == 0);
  CHECK(c.out.find("heteroclinics") == std::string::npos);
}
