#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fieldrec/filters.hpp"

namespace fieldrec {

enum class VerifyLevel { Quick, Full };

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    int failures() const;
};

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::Quick;
    std::uint64_t seed = 20240607;
    unsigned threads = 0;
    /// Swappable so a test can inject a wrong gamma and watch the reductions fail.
    std::function<double(int, double, const CharMatrix&)> gamma = gamma_param;
};

/// Jitter series truncation, jittered Fourier expectations, the trace/eigenvalue functional,
/// eigenvalue moments and the Model B -> Model A reductions.
VerifyReport run_verification(const VerifyOptions& options = {});

}  // namespace fieldrec
