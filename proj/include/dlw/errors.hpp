/// Error types shared across the workbench. The CLI maps these onto exit
/// codes: parse/validation -> 1, resource limits -> 2, precondition -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace dlw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries a 1-based source position.
struct ParseError : Error {
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

/// Structurally well-formed input that violates a model invariant
/// (inconsistent background, duplicate names, reserved atoms, ...).
struct ValidationError : Error {
  using Error::Error;
};

/// An operation was called outside its contract (not a process, no
/// extensions, non-normal theory under the normal semantics, ...).
struct PreconditionError : Error {
  using Error::Error;
};

struct NoExtensionError : PreconditionError {
  using PreconditionError::PreconditionError;
};

/// Greedy extension construction hit a successful prefix with no successful
/// one-step continuation; this is a witness of non-fail-safeness.
struct StuckError : PreconditionError {
  using PreconditionError::PreconditionError;
};

/// A verifier entry point was asked to sweep an instance that is too large
/// for exhaustive checking.
struct GuardError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct ResourceLimitError : Error {
  using Error::Error;
};

}  // namespace dlw
