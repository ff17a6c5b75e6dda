#pragma once

#include <stdexcept>
#include <string>

namespace magsteer {

/// Base class for domain errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Derived mode frequency is out of the model's validity range.
struct InvalidModel : Error {
    using Error::Error;
};

/// The two-mode squeezing transform does not exist (2 g_ab >= omega_a + omega_b).
struct SingularTransform : Error {
    using Error::Error;
};

/// Drift matrix has an eigenvalue with nonnegative real part.
struct UnstableSystem : Error {
    using Error::Error;
};

/// Stability margin too small for a well-posed steady-state solve.
struct MarginalStability : Error {
    using Error::Error;
};

/// Fewer distinct positive mode frequencies than expected.
struct DegenerateSpectrum : Error {
    DegenerateSpectrum(const std::string& what, int distinct)
        : Error(what), distinct_count(distinct) {}
    int distinct_count;
};

/// Input covariance data violates physicality bounds.
struct UnphysicalState : Error {
    using Error::Error;
};

/// Malformed configuration file or sweep specification.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace magsteer
