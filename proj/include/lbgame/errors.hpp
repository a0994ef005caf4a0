#pragma once

#include <stdexcept>
#include <string>

namespace lbg {

/// Malformed or out-of-range input (bad JSON, server index, precondition).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exhaustive search would exceed its configured size limit.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A verification check failed. Carries a description of the witness.
class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lbg
