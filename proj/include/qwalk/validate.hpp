#pragma once

#include <string>
#include <vector>

namespace qwalk {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidateOptions {
    /// Perturbation added to the reference constant C1 in the closed-form
    /// check; nonzero values exist so the harness can prove a broken
    /// constant is caught.
    double tamper_c1 = 0.0;
};

/// Runs the full validation suite (closed-form constants, 1D anchor and
/// additivity, entangled-coin extremes, uniform limit, simulator cross-check,
/// non-local invariances, randomized property suites).
std::vector<CheckResult> run_validation(const ValidateOptions& opts = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace qwalk
