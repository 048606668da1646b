// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace dbarlab {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};
struct InvalidArg : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct DegreeOverflow : Error {
  using Error::Error;
};
struct InvalidDegree : Error {
  using Error::Error;
};
struct NotClosed : Error {
  using Error::Error;
};
struct AnsatzInsufficient : Error {
  using Error::Error;
};
struct QuadratureFailure : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace dbarlab
