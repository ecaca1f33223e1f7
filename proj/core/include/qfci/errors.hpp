#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfci {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConsistencyError : public Error {
  using Error::Error;
};
class DimensionMismatch : public Error {
  using Error::Error;
};
class CapExceeded : public Error {
  using Error::Error;
};
class IndexOutOfRange : public Error {
  using Error::Error;
};
class DegenerateState : public Error {
  using Error::Error;
};
class SectorTooLarge : public Error {
  using Error::Error;
};
class MissingSector : public Error {
  using Error::Error;
};
class WeightNormalization : public Error {
  using Error::Error;
};
class InvalidArgument : public Error {
  using Error::Error;
};
class ElectronCountExceedsOrbitals : public Error {
  using Error::Error;
};
class OverlapWithCore : public Error {
  using Error::Error;
};
class EmptyAfterThreshold : public Error {
  using Error::Error;
};
class EmptyString : public Error {
  using Error::Error;
};

/// A guess-file line that is not `amplitude bitstring`.
class MalformedLine : public ParseError {
  using ParseError::ParseError;
};

}  // namespace qfci
