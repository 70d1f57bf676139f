#pragma once

#include <stdexcept>
#include <string>

namespace relay {

// Caller misuse: bad arguments, invalid configuration, malformed input.
// The CLI maps these to exit code 2.
struct usage_error : std::invalid_argument {
    explicit usage_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Feature intentionally not provided (e.g. 2-D convolution).
struct unsupported_error : usage_error {
    explicit unsupported_error(const std::string& msg) : usage_error(msg) {}
};

// Scenario-file problems, carrying a field path where possible.
struct parse_error : usage_error {
    explicit parse_error(const std::string& msg) : usage_error(msg) {}
};

// Runtime numerical failure (e.g. a Lloyd cell that cannot be repopulated).
// The CLI maps these to exit code 1.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace relay
