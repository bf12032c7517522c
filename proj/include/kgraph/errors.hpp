#pragma once

#include <stdexcept>
#include <string>

namespace kgraph {

/// Base of every error the engine raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that does not describe a presentation at all (bad shapes, negative
/// counts, unknown vertices, syntax errors in documents).
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// An operation was called on input violating its precondition.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// Two independent computations disagreed. Always a bug in the engine.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// A configured size cap was exceeded.
class ResourceExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace kgraph
