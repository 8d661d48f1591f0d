#pragma once

#include <stdexcept>
#include <string>

namespace deblur {

// Invalid argument, shape mismatch or violated precondition.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite data reached a routine that needs finite input.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// File could not be read, written or decoded.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace deblur
