#pragma once
// The verification suites behind `statlim verify` and the acceptance test
// binary. Every check pins its tolerance in code and reports the measured
// value alongside the verdict.

#include "statlim/constructions.hpp"
#include "statlim/real_sets.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace statlim::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, thresholds
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

// The six-layer representation of A = [0,1/4] ∪ {3/4} used by the principal
// experiment. Layer list: four strips of [0,1/4], then {1/4}, then {3/4}; the
// strip endpoints and midpoints make every 1/32 grid cell of A reachable at
// the dense-enumeration indices visible at a 10^5 prefix.
struct TripleFixture {
  RFSigma A;
  RClosedSet B;
  RClosedSet C;
};
TripleFixture principal_triple_fixture();

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name);
std::vector<SuiteResult> run_all();

// Prints "[PASS]/[FAIL] suite.check detail" lines; returns 0 when everything
// passed, 1 otherwise.
int report(const std::vector<SuiteResult>& results, std::ostream& os);

}  // namespace statlim::verify
