// Error types thrown across the solver suite. Each carries enough context to
// point at the offending input (position, node, config key) without a debugger.

#pragma once

#include <stdexcept>
#include <string>

namespace fannowave {

// Invalid physical state or out-of-range argument (rho <= 0, r3 <= r1, x outside duct, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Steady integration hit the sonic margin: the duct is too long for the given inflow.
struct ChokingError : std::runtime_error {
    double x_choke;  // position where c - u first dropped below the margin
    ChokingError(const std::string& what, double x) : std::runtime_error(what), x_choke(x) {}
};

// A state left the certified subsonic neighborhood, or a characteristic slope
// exceeded its bound. Message names the offending node.
struct InstabilityError : std::runtime_error {
    explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-point iteration exhausted max_iter without meeting tol. The caller can
// recover the partial convergence history from the message or the report object.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: mismatched grids, CFL violation, calling with unusable arguments.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Config file problem; message names the key and, for parse errors, the line.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fannowave
