#pragma once

#include <stdexcept>
#include <string>

namespace torusfill {

// Input violates a documented precondition (bad parameter range, non-unit
// direction, missing cutoff, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured enumeration or memory budget would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant that the mathematics guarantees did not hold. Always
// a bug or a floating tolerance mismatch, never a user error.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace torusfill
