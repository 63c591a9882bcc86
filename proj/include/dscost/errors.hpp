#pragma once

#include <stdexcept>
#include <string>

namespace dscost {

// Precision loss beyond the documented clamp allowance in an
// alternating-series evaluation. CLI maps this to exit code 2.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected configuration input; message carries the offending field path.
// CLI maps this (and std::invalid_argument) to exit code 1.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dscost
