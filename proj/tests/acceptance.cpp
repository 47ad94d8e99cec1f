// Runs the ten acceptance criteria and prints one line per criterion.
// Exit status 0 when every criterion passes, 1 otherwise.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "madelung_lab/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"madelung-lab acceptance suite"};
  mlab::acceptance::Options opt;
  std::vector<int> ids;
  std::string fault = "none";
  std::string json_path;
  app.add_flag("--quick", opt.quick, "smaller grids and samples, tolerances x10");
  app.add_option("--only", ids, "criterion ids to run")->check(CLI::Range(1, 10));
  app.add_option("--seed", opt.seed, "base seed");
  app.add_option("--json", json_path, "write the full report here");
  // Negative control: breaks the GP integrator on purpose.
  app.add_option("--inject-fault", fault)->group("");
  CLI11_PARSE(app, argc, argv);

  try {
    opt.fault = mlab::parse_fault(fault);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  const auto results = mlab::acceptance::run_suite(opt, ids, [](const auto& r) {
    std::printf("%s\n", mlab::acceptance::summary_line(r).c_str());
    std::fflush(stdout);
  });

  int passed = 0;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : results) {
    passed += r.passed;
    all.push_back(mlab::acceptance::to_json(r));
  }
  std::printf("%d/%zu criteria passed\n", passed, results.size());
  if (!json_path.empty()) {
    std::ofstream(json_path) << all.dump(2) << '\n';
  }
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}
