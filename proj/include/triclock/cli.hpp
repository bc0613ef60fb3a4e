#pragma once

// Command-line front end. Exit codes: 0 success, 1 I/O failure,
// 2 usage or validation failure.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace triclock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

/// Relative output paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "TRICLOCK_OUTPUT_DIR";

/// Flat `key = value` settings. Blank lines and `#` comments are skipped;
/// values may be wrapped in double quotes. Throws std::invalid_argument with
/// the line number on malformed input.
std::map<std::string, std::string> parse_config_text(const std::string& text);
/// Throws std::runtime_error if the file cannot be read.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// Settings shared by every subcommand plus the per-command knobs.
struct RunConfig {
  double epsilon = 0.05;
  double mu = 0.1;
  double h = 1.0;
  double alpha = 0.0;
  std::string format;
  std::string output_path;
  bool degrees = false;
  unsigned workers = 1;

  // step
  std::optional<double> x, y;
  int count = 1;

  // fixed-points / verify
  int seeds = 50;
  double tol = 0.0;

  // basins / portrait
  int resolution = 200;
  int max_iter = 0;

  // simulate
  int n_clocks = 3;
  std::vector<double> phases;
  int starts = 1;
  unsigned long long seed = 1;
  int max_cycles = 2000;
  double splay_tol = 1e-3;
  std::string trace_path;
  std::string trace_format = "jsonl";
  int trace_cycles = 1;

  // verify
  int samples = 1000;
  int grid = 300;

  // andronov
  double v0 = 5.0;
  int steps = 200;

  // portrait
  std::vector<std::string> layers;
  int orbits = 12;
};

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace triclock::cli
