#pragma once

#include <stdexcept>
#include <string>

namespace quantfield {

// Rejected input: bad dimensions, out-of-domain parameters, malformed files.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure did not reach its requested accuracy.
class NumericalFailure : public std::runtime_error {
public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// A logarithm was requested of a non-positive quantity.
class DomainError : public NumericalFailure {
public:
  explicit DomainError(const std::string& what) : NumericalFailure(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace quantfield
