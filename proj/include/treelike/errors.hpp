#pragma once

#include <stdexcept>
#include <string>

namespace treelike {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument: empty leaf set, foreign leaf, mismatched leaf sets, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

// A cluster family that is not laminar, or lacks L / a singleton.
class HierarchyError : public Error {
 public:
  using Error::Error;
};

// A map that is not a symbolic ultrametric / not a Fitch map.
class RecognitionError : public Error {
 public:
  using Error::Error;
};

// A tree that does not refine the least-resolved tree it is lifted from.
class RefinementError : public Error {
 public:
  using Error::Error;
};

// (delta, epsilon) is not tree-like; what() carries the verdict witness.
class IncompatibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace treelike
