#pragma once

#include <stdexcept>
#include <string>

namespace ancova {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an argument was violated (bad shape, non-finite input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A factor-level count was too small for the requested construction.
class InvalidArity : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Some group label in 1..a has no observations.
class EmptyGroup : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An unknown error-distribution tag was supplied.
class UnknownDistribution : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A simulation scenario failed validation.
class InvalidScenario : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Numerical failure: a symmetric solve hit a pivot below threshold.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// The design matrix is numerically rank deficient.
class RankDeficient : public Error {
 public:
  RankDeficient(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}
  /// Index of the design column that triggered the failing pivot.
  std::size_t column() const { return column_; }

 private:
  std::size_t column_ = 0;
};

/// An observation has leverage numerically equal to one.
class LeverageOne : public Error {
 public:
  using Error::Error;
};

/// H * Cov * H' is numerically singular for a contrast hypothesis.
class SingularWaldCore : public Error {
 public:
  using Error::Error;
};

}  // namespace ancova
