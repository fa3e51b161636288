#pragma once

#include <stdexcept>
#include <string>

namespace fracdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Both gamma arguments of a falling factorial sit on poles and the order is
/// not a nonnegative integer, so no limiting value is defined.
class PoleAmbiguous : public Error {
 public:
  using Error::Error;
};

/// Exact arithmetic produced a numerator or denominator wider than the bit cap.
class BackendOverflow : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class GridTooShort : public Error {
 public:
  using Error::Error;
};

class EmptyValues : public Error {
 public:
  using Error::Error;
};

class DirectFormIntegerOrder : public Error {
 public:
  using Error::Error;
};

/// Malformed input record or CSV file.
class ParseError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace fracdiff
