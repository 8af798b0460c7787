#pragma once

#include <stdexcept>
#include <string>

namespace qcode {

// Exception hierarchy. Each leaf maps onto one CLI exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

// Malformed input, parameter mismatch, bad file contents.
class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

// A configured budget (vertices, memory, enumeration size) was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

// A mathematical invariant the proof relies on did not hold.
class InvariantError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

}  // namespace qcode
