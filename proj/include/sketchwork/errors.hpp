#pragma once

#include <stdexcept>
#include <string>

namespace sketchwork {

/// Root of every exception thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph: duplicate identifiers, edges with unknown endpoints.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Partial or structure-breaking node/edge maps, and dom/cod mismatches.
class MorphismError : public Error {
 public:
  using Error::Error;
};

/// Constraint declarations that do not fit their metamodel, or morphisms
/// that are not constraint-compatible.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class ViewError : public Error {
 public:
  using Error::Error;
};

class MergeError : public Error {
 public:
  using Error::Error;
};

/// Two linked elements carry different types in the merged metamodel.
class TypingConflict : public MergeError {
 public:
  using MergeError::MergeError;
};

class LensError : public Error {
 public:
  using Error::Error;
};

/// The update handed to a propagation does not start where the
/// correspondence (or the current view) says the model is.
class ContinuityError : public LensError {
 public:
  using LensError::LensError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sketchwork
