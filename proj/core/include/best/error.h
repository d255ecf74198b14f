#ifndef BEST_ERROR_H_
#define BEST_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace best {

// Root of every error thrown by the library. Callers that only want to
// report and exit can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed argument or data that violates a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A file or text record could not be decoded. Carries the 1-based line
// number when the failure is attributable to a single line (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The validation split is too small to form a search range q in [2, n_val/n].
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Threshold filtering removed every source.
class NoSurvivors : public Error {
 public:
  using Error::Error;
};

// Flattened cell index does not fit in 64 bits.
class IndexNotRepresentable : public Error {
 public:
  using Error::Error;
};

// Correlation coefficient undefined (constant input).
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

}  // namespace best

#endif  // BEST_ERROR_H_
