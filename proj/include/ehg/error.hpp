#pragma once

#include <stdexcept>
#include <string>

namespace ehg {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Tensor/matrix dimension mismatch. Messages name both offending shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range index; messages name the offending position.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument value (unknown op tag, ratio outside its range, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Structural violation of a graph or dual-hypergraph invariant.
class GraphError : public Error {
 public:
  enum class Kind {
    EndpointOutOfRange,
    SelfLoop,
    DuplicateEdge,
    FeatureShapeMismatch,
    NotTwoRegular,
  };

  GraphError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Misuse of the reverse-mode engine (no gradient path, repeated backward).
class AutogradError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (JSON graph, config); message carries context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Bad or missing configuration key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ehg
