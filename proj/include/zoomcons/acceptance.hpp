#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zoomcons {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

/// Runs the end-to-end acceptance checks (all of them, or just `only`).
/// A check passes only if its assertion holds within its time limit.
std::vector<CriterionResult> run_acceptance(std::optional<int> only = std::nullopt);

/// One PASS/FAIL line per criterion; returns true iff all passed.
bool print_acceptance_report(std::ostream& out, const std::vector<CriterionResult>& results);

/// Essential spectral radius of the maximum-degree ring from the circulant
/// eigenvalue formula 1 - (2/3)(1 - cos(2 pi k / n)).
double ring_circulant_rho(std::size_t n);

}  // namespace zoomcons
