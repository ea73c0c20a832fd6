#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cspimp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured size limit (basis, candidates, variables) was hit.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The language falls into a class with no implemented pipeline at this size.
class UnsupportedClass : public Error {
 public:
  using Error::Error;
};

class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidArgument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace cspimp
