#pragma once

#include <stdexcept>
#include <string>

namespace hhgq {

// Bad user input: malformed config, invalid parameter ranges, dimension
// mismatches between states and operators. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A physics guard tripped: norm drift past the abort threshold, overlap
// matrix condition cap exceeded, truncation unable to hold the state.
// CLI maps this to exit code 3.
struct PhysicsGuardError : std::runtime_error {
    explicit PhysicsGuardError(const std::string& what) : std::runtime_error(what) {}
};

// A ratio statistic (g2, cross-correlation, ...) was requested on a state
// whose mean photon number is below the epsilon guard.
struct UndefinedStatisticError : std::runtime_error {
    explicit UndefinedStatisticError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hhgq
