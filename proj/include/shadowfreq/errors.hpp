#pragma once

#include <stdexcept>
#include <string>

namespace shadowfreq {

/// File could not be read or written. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input violates an operation precondition. Maps to CLI exit code 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An internal invariant failed to hold. Maps to CLI exit code 4.
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace shadowfreq
