#pragma once

#include <stdexcept>
#include <string>

namespace stepanov {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor index bookkeeping violations.
struct SlotError : Error {
    using Error::Error;
};
struct VarianceError : Error {
    using Error::Error;
};
struct RankError : Error {
    using Error::Error;
};

// DSL parsing, with 1-based source position.
struct ParseError : Error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& what_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + what_),
          line(line_), col(col_) {}
};

// Evaluation singularities and points outside the chart domain.
struct DomainError : Error {
    using Error::Error;
};

struct DegenerateMetricError : Error {
    using Error::Error;
};
struct NotAMetricError : Error {
    using Error::Error;
};

// Manifest schema violations.
struct ManifestError : Error {
    using Error::Error;
};
// Structural misuse (odd dimension with F, missing F, ...).
struct StructuralError : Error {
    using Error::Error;
};
// Theorem verifier refusal: preconditions not met. Distinct from failure.
struct PreconditionError : Error {
    using Error::Error;
};

} // namespace stepanov
