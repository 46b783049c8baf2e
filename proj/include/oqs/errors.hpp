#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oqs {

// Malformed or out-of-schema scenario configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integrator blow-up, solver non-convergence and similar failures.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    NumericalError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step), has_step_(true) {}

    bool has_step() const noexcept { return has_step_; }
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_{0};
    bool has_step_{false};
};

class UnphysicalStateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Exact-oracle basis too large, or truncation leakage above threshold.
class OracleLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace oqs
