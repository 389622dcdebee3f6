#pragma once

#include <stdexcept>
#include <string>

namespace d2dcache {

/// Input outside the mathematical domain of an operation (nonpositive radius,
/// q > n, v <= r, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Code parameters that violate k <= d <= n-1 or related constraints.
class FeasibilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid configuration values or files.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Linear solve failed or was too ill-conditioned to trust.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double rcond)
        : std::runtime_error(what + " (rcond estimate " + std::to_string(rcond) + ")"),
          rcond_(rcond) {}

    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

} // namespace d2dcache
