#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace photodev {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;  // worst residual / margin seen by the suite
    std::string detail;
};

struct ValidationReport {
    std::vector<SuiteResult> suites;

    bool all_passed() const {
        for (const auto& s : suites) {
            if (!s.passed) return false;
        }
        return true;
    }
};

struct ValidateOptions {
    std::uint64_t seed = 0;
    // Fault injection for testing the harness itself: flips the sign of one
    // probability current before the conservation-law check.
    bool tamper_rate_sign = false;
};

// Cross-oracle invariant suites of every module: distribution identities,
// local detailed balance, Lindblad NESS vs rate-network null vector,
// conservation laws, thermodynamic laws on the fig2 grid, Spohn vs currents
// entropy production, the totally asymmetric performance identity, FCS
// identities, Drazin vs quadrature vs Gillespie noise, and the degenerate
// kernel probe.
ValidationReport run_validate(const ValidateOptions& options = {});

}  // namespace photodev
