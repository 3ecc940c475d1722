#pragma once

#include <stdexcept>
#include <string>

namespace haarorbit {

/// Input could not be parsed or failed schema/invariant validation. CLI exit code 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A mathematical precondition does not hold (regime, window, dimension mismatch).
/// CLI exit code 3.
class ConditionError : public std::runtime_error {
public:
    explicit ConditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Request exceeds a hard resource cap. CLI exit code 4.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace haarorbit
