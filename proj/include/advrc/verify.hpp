#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace advrc::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

enum class Suite { all, norms, perturb, sandwich, shatter };

Suite suite_from_string(const std::string& s);

// Runs the named property suite; one result per criterion. Deterministic
// under the seed.
std::vector<CriterionResult> run_suite(Suite suite, std::uint64_t seed);

// Prints "PASS"/"FAIL" lines; returns true iff everything passed.
bool print_results(const std::vector<CriterionResult>& results);

}  // namespace advrc::verify
