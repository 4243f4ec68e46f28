#include <cstdlib>
#include <cstring>
#include <iostream>

#include "magstrip/verify.hpp"

// Runs acceptance criteria 1-9 and prints one PASS/FAIL line per criterion.
// Level: "full" by default; "--fast" or MAGSTRIP_ACCEPTANCE_LEVEL=fast for the
// reduced ladders.
int main(int argc, char** argv) {
  using namespace magstrip;
  VerifyOptions opt;
  opt.level = VerifyLevel::full;
  if (const char* env = std::getenv("MAGSTRIP_ACCEPTANCE_LEVEL")) opt.level = verify_level_from_string(env);
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) opt.level = VerifyLevel::fast;
    if (std::strcmp(argv[i], "--full") == 0) opt.level = VerifyLevel::full;
  }
  opt.on_result = [](const CriterionResult& r) {
    std::cout << "criterion " << r.id << " " << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.seconds
              << " s)  " << r.detail << std::endl;
  };
  std::cout << "acceptance level " << to_string(opt.level) << std::endl;
  const VerifyReport rep = run_verification(opt);
  int failed = 0;
  for (const auto& c : rep.criteria) failed += !c.passed;
  std::cout << (failed == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failed)) << std::endl;
  return failed == 0 ? 0 : 1;
}
