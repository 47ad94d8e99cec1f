#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "madelung_lab/dynamics.hpp"
#include "madelung_lab/errors.hpp"

namespace mlab::cli {

/// Invalid experiment configuration. Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" lines; '#' starts a comment. Repeated keys: last wins.
KeyValues parse_config_text(const std::string& text);
KeyValues read_config_file(const std::filesystem::path& path);

const std::vector<std::string>& commands();

struct ExperimentConfig {
  std::string command;
  double length = 60.0;
  std::size_t n_points = 2048;
  double s = 1.0;
  SimConfig sim;
  std::optional<double> hgp_dt;  // empty: the dispersive stability limit
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "madelung_lab_out";
  std::string init = "qdelta:0.5";
  std::string left = "one";
  std::string right = "qdelta:0.5";
  double delta = 0.5;
  std::vector<double> deltas{0.1, 0.25, 0.5, 0.75, 0.9};
  std::size_t samples = 100;
  double energy_cap = 1.2;
  double amp_mod = 0.15;
  double amp_phase = 0.45;
  double margin = 0.01;  // certificate level b = E(q0) + margin
  double energy_tol = 1e-6;
  double conj_tol = 1e-3;
  std::size_t compare_points = 5;
  double ball_radius = 0.0;  // 0: no per-ball breakdown
  bool quick = false;
  KeyValues resolved;  // every key with its effective value, output_dir excluded
};

/// Defaults overridden by `kv`. Unknown keys, malformed numbers, non power
/// of two N and an s outside the command's range throw ConfigError.
ExperimentConfig make_config(const KeyValues& kv);

/// one | qdelta:<d> | plane:<k> | file:<path> | perturb:<amp>:<seed>.
ComplexField initial_condition(const std::string& text, const Grid1D& grid, double s);

struct RunReport {
  nlohmann::json payload;  // deterministic given the config
  nlohmann::json timings;
  bool passed = false;
};

/// Dispatches the command and writes report.json, timings.json and any CSV
/// artifacts into output_dir.
RunReport run(const ExperimentConfig& config);

/// Full command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace mlab::cli
