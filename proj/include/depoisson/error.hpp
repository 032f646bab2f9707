#pragma once

#include <stdexcept>
#include <string>

namespace depoisson {

// Invalid caller input (ranges, shapes, preconditions). CLI exit status 2.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input files. CLI exit status 2.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failures: non-convergence, singular matrices, values outside a
// function's domain. CLI exit status 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

// p̂_0 = 0: no bin is empty, so log p̂_0 is undefined.
class NoEmptyBinsError : public DomainError {
 public:
  NoEmptyBinsError() : DomainError("no empty bins: log of the zero-count frequency is undefined") {}
};

// The ECF vanishes on a grid node.
class SingularEcfError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A nonzero winding number could not be removed by the requested correction.
class CorrectionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace depoisson
