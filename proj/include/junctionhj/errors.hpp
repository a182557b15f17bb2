#pragma once

#include <stdexcept>
#include <string>

namespace junctionhj {

// Error taxonomy. The CLI maps these onto distinct exit codes:
// ConfigError -> 2, AssumptionViolated / failed validators -> 3,
// everything else below -> 4.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssumptionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LevelBelowMinimum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BracketNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CFLViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonpositiveViscosity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace junctionhj
