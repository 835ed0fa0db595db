#pragma once

#include <stdexcept>
#include <string>

namespace defring {

// Bad input documents or data that fails a structural check.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller passed arguments that do not fit together.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Memory guard or enumeration cap would be exceeded.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hypothesis gates (multiplicity-free, vanishing conditions, arity shortfall).
struct Refusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace defring
