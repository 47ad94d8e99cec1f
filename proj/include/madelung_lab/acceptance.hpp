#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "madelung_lab/dynamics.hpp"

namespace mlab::acceptance {

/// Where an expected value comes from: a published closed form, an exact
/// identity, or an oracle/refinement argument built here.
enum class Basis { published, identity, derived };

std::string to_string(Basis b);

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", "==", "in", "finite", "monotone"
  double bound = 0.0;
  double bound_hi = 0.0;  // upper end for "in"
  Basis basis = Basis::derived;
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();
  std::string error;  // set when the criterion threw
};

struct Options {
  bool quick = false;   // smaller N and samples, tolerances x10
  Fault fault = Fault::none;
  std::uint64_t seed = 20240611;
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion `id` (1-based). Exceptions are caught and reported as a
/// failed criterion with `error` set.
CriterionResult run_criterion(int id, const Options& options);

/// Runs the requested criteria (all when empty), calling `on_result` as each
/// one finishes.
std::vector<CriterionResult> run_suite(const Options& options, const std::vector<int>& ids = {},
                                       const std::function<void(const CriterionResult&)>& on_result = {});

/// One line: "PASS  4  GP energy conservation  drift = ... < ...  (1.23 s)".
std::string summary_line(const CriterionResult& r);

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const CriterionResult& r, bool with_timing = true);

}  // namespace mlab::acceptance
