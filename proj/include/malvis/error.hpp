#pragma once

#include <stdexcept>
#include <string>

namespace malvis {

// Bad or inconsistent input data (shapes, file contents, labels).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments supplied by a caller (zero sizes, out-of-range fractions).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace malvis
