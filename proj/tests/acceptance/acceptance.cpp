// Runs every acceptance scenario and prints one line per criterion.
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include "dyson/errors.hpp"
#include "dyson/harness.hpp"
#include "dyson/scenario.hpp"

int main(int argc, char** argv) {
  std::string out;
  std::string suite = "full";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) out = argv[++i];
    else if (std::strcmp(argv[i], "--suite") == 0 && i + 1 < argc) suite = argv[++i];
  }
  std::ostringstream detail;
  dyson::SuiteResult res;
  try {
    res = dyson::verify(suite, out, dyson::default_scenario_dir(), detail);
  } catch (const std::exception& e) {
    std::cout << detail.str() << "acceptance aborted: " << e.what() << '\n';
    return 2;
  }
  std::cout << detail.str() << "\n";
  const auto lines = dyson::summarize(res.verdicts);
  int failed = 0;
  for (const auto& l : lines) {
    std::cout << "criterion " << l.criterion << " [" << l.check << "]: " << (l.passed ? "PASS" : "FAIL") << '\n';
    failed += l.passed ? 0 : 1;
  }
  std::cout << lines.size() - failed << "/" << lines.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
