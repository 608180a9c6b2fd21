#pragma once

#include <stdexcept>
#include <string>

namespace ftcl {

/// Malformed input text (edge lists, generator specs).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A query that violates its preconditions (s or t failed, |F| > f, ...).
struct InvalidQuery : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal structural invariant failed during construction.
/// Signals an implementation bug, never bad user input.
struct ConstructionError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace ftcl
