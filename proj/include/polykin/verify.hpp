#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace polykin::verify {

/// Outcome of one invariant suite. `report` is the JSON written by the CLI;
/// `failing_case` holds the inputs of the first violated check (null when
/// everything passed) so it can be replayed.
struct SuiteResult {
    bool passed = true;
    nlohmann::json report;
    nlohmann::json failing_case;
};

struct SuiteOptions {
    std::size_t samples = 1000000;
    double alpha = 0.0;
    double zeta = 1.0;
    double eta = 0.5;
    double kmax = 40.0;
    unsigned threads = 1;
    std::uint64_t seed = 12345;
    /// averaging suite only
    std::size_t states = 300;
    std::size_t n_mc = 20000;
};

/// Exchange collisions conserve momentum and energy to 1e-12 (relative);
/// frozen collisions keep I bit-exact and |u| to 1e-12.
SuiteResult collision_suite(const SuiteOptions& opt);

/// Energy-identity residuals and bounds on random states, tolerance 1e-10.
SuiteResult energy_identity_suite(const SuiteOptions& opt);

/// Closed-form kernel constants against quadrature, and the kernel sandwich
/// on random states.
SuiteResult kernel_constants_suite(const SuiteOptions& opt);

/// Empirical C_k for k = 0..kmax, kappa bounds and k*. Fails when the
/// sequence is not non-increasing or no k* exists up to kmax.
SuiteResult averaging_suite(const SuiteOptions& opt);

/// Dispatch by name; throws std::invalid_argument for an unknown suite.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace polykin::verify
