#pragma once

#include <stdexcept>
#include <string>

namespace vitalband {

// Bad flags, bad config values, invalid profile schedules. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files. CLI exit code 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data that cannot be interpreted (e.g. mostly-malformed CSV). CLI exit code 1.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated numeric preconditions, e.g. vmin >= vmax in a value range.
class RangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace vitalband
