#pragma once

#include <stdexcept>
#include <string>

namespace biruin {

// Invalid model parameters, malformed configuration, or a window/request
// the implementation refuses to honor. CLI maps this to exit code 2.
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Numeric failure: working precision exhausted, estimate degenerate,
// or results outside tolerances that indicate an undersized window.
// CLI maps this to exit code 3.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace biruin
