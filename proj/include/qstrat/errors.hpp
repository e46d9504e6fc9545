#pragma once

#include <stdexcept>
#include <string>

namespace qstrat {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Iterative inversion did not reach tolerance.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pairwise moments requested for a sample of size one.
struct PairUndefined : std::domain_error {
    using std::domain_error::domain_error;
};

struct EmptySample : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// g(x) == 0 at a point where H(x)f(x) != 0.
struct ZeroProposalDensity : std::domain_error {
    using std::domain_error::domain_error;
};

// Invalid user-facing configuration (layer sums, replicate counts, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace qstrat
