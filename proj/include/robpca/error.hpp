#ifndef ROBPCA_ERROR_HPP
#define ROBPCA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace robpca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the arguments do not agree.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// An argument violates a precondition (empty input, out-of-range parameter,
/// non-finite value, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Iterative routine exhausted its iteration budget.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent file contents.
class FormatError : public Error {
public:
  using Error::Error;
};

}  // namespace robpca

#endif  // ROBPCA_ERROR_HPP
