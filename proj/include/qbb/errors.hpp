#pragma once

#include <stdexcept>
#include <string>

namespace qbb {

/// Malformed or out-of-contract input (bad datum file, missing tau entry,
/// precondition violation). CLI maps this to exit code 1.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Internal consistency failure (nonzero relation residual, non-integral
/// root multiplicity, negative character coefficient). CLI exit code 2.
struct consistency_error : std::runtime_error {
    explicit consistency_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qbb
