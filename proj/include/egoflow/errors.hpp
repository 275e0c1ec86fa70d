#pragma once

#include <stdexcept>
#include <string>

namespace egoflow {

// Invalid argument to a library operation (bad intrinsics, nonpositive
// depth, dimension mismatch, non-finite motion components, ...).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input data (bad magic, truncated payload, wrong bit depth,
// missing calibration key, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failure (file not found, short write, ...).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace egoflow
