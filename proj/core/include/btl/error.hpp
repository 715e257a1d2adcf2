#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace btl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derivative order outside the supported multi-index set.
class UnsupportedIndexError : public Error {
 public:
  using Error::Error;
};

/// Raised eagerly when a graph node produces NaN or infinity.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::int64_t node)
      : Error(what), node_(node) {}
  std::int64_t node() const { return node_; }

 private:
  std::int64_t node_;
};

/// Solution or transform parameters outside their valid domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace btl
