#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hvgrid {

// Base class of everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally malformed input stream (bad header, wrong column count).
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

// Input violates a documented precondition.
struct ValidationError : Error {
    using Error::Error;
};

// The requested metric has no defined value on this graph.
struct UndefinedMetricError : Error {
    using Error::Error;
};

// A voltage filter left no edges; the variant does not exist for this grid.
struct EmptyVariantError : Error {
    using Error::Error;
};

// Degree-distribution fit cannot be carried out on this input.
struct FitError : Error {
    using Error::Error;
};

} // namespace hvgrid
