#pragma once

#include <stdexcept>
#include <string>

namespace polyq {

/// Caller supplied something outside an operation's contract.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive search would exceed a configured size guard.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A self-check failed. This always indicates a bug in the library (or a
/// forged certificate handed to it), never bad user input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

#define POLYQ_ENSURE(cond, msg)                                                \
    do {                                                                       \
        if (!(cond)) throw ::polyq::InvariantViolation(std::string(msg));      \
    } while (0)

}  // namespace polyq
