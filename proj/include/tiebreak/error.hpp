#pragma once

#include <stdexcept>
#include <string>

namespace tiebreak {

// Base for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition or argument violation.
struct DomainError : Error {
    using Error::Error;
};

// Configured resource bound exceeded (e.g. play-enumeration guard).
struct ResourceError : Error {
    using Error::Error;
};

// Text input rejected; position is 1-based.
struct ParseError : Error {
    ParseError(std::string msg, int line, int column)
        : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line(line),
          column(column) {}
    int line;
    int column;
};

// A move that does not replay legally; ply is 1-based.
struct IllegalMoveError : Error {
    IllegalMoveError(std::string msg, int ply)
        : Error(msg + " (ply " + std::to_string(ply) + ")"), ply(ply) {}
    int ply;
};

// Engine process / protocol / mock-table failure.
struct EngineError : Error {
    using Error::Error;
};

// Annotation stopped mid-game; carries the sum over the completed prefix.
struct PartialAnnotationError : Error {
    PartialAnnotationError(std::string msg, double prefix_tplv)
        : Error(std::move(msg)), prefix_tplv(prefix_tplv) {}
    double prefix_tplv;
};

}  // namespace tiebreak
