#pragma once

#include <stdexcept>
#include <string>

namespace newtondrag {

/// Bad input: malformed arguments, violated preconditions. CLI exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A constraint set that admits no admissible profile. CLI exit code 3.
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root finding or search did not converge. CLI exit code 4.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}

}  // namespace newtondrag
