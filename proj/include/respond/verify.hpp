#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace respond {

struct CriterionResult {
  std::string id;    // "1".."10" for acceptance criteria, "core.*" for auxiliary checks
  std::string name;
  bool passed = false;
  double measured = 0.0;   // headline metric compared against tolerance
  double tolerance = 0.0;
  double runtime = 0.0;    // seconds
  double runtime_budget = 0.0;
  std::string detail;
};

// Acceptance criteria 1..10. InvalidArgument for other ids.
CriterionResult run_criterion(int id);

// Auxiliary core checks: KMS rates, trace preservation, duality of the adjoint.
CriterionResult check_kms();
CriterionResult check_trace_preservation();
CriterionResult check_duality();

// all | core | qubit | oscillator | thermo. InvalidArgument for unknown suites.
std::vector<CriterionResult> run_suite(std::string_view suite);
std::vector<std::string> suite_names();

// One line: "[PASS] id name: measured=... tol=... runtime=...s (budget ...s) detail".
void print_result(std::ostream& out, const CriterionResult& r);

}  // namespace respond
