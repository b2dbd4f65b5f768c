#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dmoe {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bin endpoints failed validation (non-monotone, out of range, ...).
struct InvalidLayout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature or another numeric routine failed to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RecalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t line_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"),
          line(line_no) {}
    std::size_t line;
};

}  // namespace dmoe
