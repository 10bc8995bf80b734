#pragma once

#include <stdexcept>
#include <string>

namespace permsel {

/// Base of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The three category bases map onto CLI exit codes:
// ConfigError -> 2, DataError -> 3, NumericalError -> 4.

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// --- linear model kernel ---

class LengthMismatch : public DataError {
 public:
  using DataError::DataError;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Residual sum of squares is (numerically) zero; the Gaussian likelihood
/// is unbounded and every downstream score is undefined.
class PerfectFit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LeverageOne : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// --- scoring ---

class SmallSample : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroDensity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TooFewRows : public DataError {
 public:
  using DataError::DataError;
};

class FoldPerfectFit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FoldRankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// --- population models and datasets ---

class NonPositiveCount : public DataError {
 public:
  using DataError::DataError;
};

class UnknownCovariate : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

// --- permutation machinery ---

class NoDerangement : public DataError {
 public:
  using DataError::DataError;
};

// --- file ingestion ---

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class GapError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace permsel
