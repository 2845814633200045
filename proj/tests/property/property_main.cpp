// Standalone property suite: `tamdp_properties [name...]` runs all checks or
// the named ones and exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <unistd.h>
#include <vector>

#include "../support/properties.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace tamdp::testing;
  const fs::path scratch = fs::temp_directory_path() / ("tamdp_properties_" + std::to_string(::getpid()));
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<std::string()>>> checks{
      {"objective_monotonicity", check_objective_monotonicity},
      {"transition_rows", check_transition_rows},
      {"schedule_breakpoints", check_schedule_breakpoints},
      {"seeded_reproducibility", [&] { return check_seeded_reproducibility(scratch); }},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failed = 0;
  int ran = 0;
  for (const auto& [name, check] : checks) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    std::string err;
    try {
      err = check();
    } catch (const std::exception& e) {
      err = std::string("exception: ") + e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (err.empty() ? "PASS " : "FAIL ") << name << " (" << sec << " s)";
    if (!err.empty()) std::cout << ": " << err;
    std::cout << "\n";
    failed += !err.empty();
  }
  fs::remove_all(scratch);
  if (ran == 0) {
    std::cerr << "no such property\n";
    return 2;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
