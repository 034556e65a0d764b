#pragma once

#include <stdexcept>
#include <string>

namespace ikwsms {

// Process exit status associated with each error family.
enum class ErrorClass : int {
  generic = 1,
  usage = 2,
  input = 3,
  estimation = 4,
  inference = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}

  ErrorClass error_class() const noexcept { return class_; }
  int exit_code() const noexcept { return static_cast<int>(class_); }

 private:
  ErrorClass class_;
};

// Non-finite argument passed to a kernel or similar pure function.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorClass::generic, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorClass::usage, what) {}
};

// Malformed input file, carrying the 1-based data row and column name when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long row = -1, std::string column = {})
      : Error(ErrorClass::input, what), row_(row), column_(std::move(column)) {}

  long row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  long row_;
  std::string column_;
};

class InvalidDataError : public Error {
 public:
  explicit InvalidDataError(const std::string& what) : Error(ErrorClass::input, what) {}
};

// All first-stage kernel weights vanish at the evaluation point.
class DegenerateWindowError : public Error {
 public:
  explicit DegenerateWindowError(const std::string& what)
      : Error(ErrorClass::estimation, what) {}
};

// Zero interquartile range or similar collapse of the data used for bandwidths.
class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& what)
      : Error(ErrorClass::estimation, what) {}
};

class VarianceDegeneracyError : public Error {
 public:
  explicit VarianceDegeneracyError(const std::string& what)
      : Error(ErrorClass::estimation, what) {}
};

class RankDeficientError : public Error {
 public:
  explicit RankDeficientError(const std::string& what)
      : Error(ErrorClass::inference, what) {}
};

// Too many failed bootstrap or Monte Carlo replications.
class ReplicationFailureError : public Error {
 public:
  explicit ReplicationFailureError(const std::string& what)
      : Error(ErrorClass::inference, what) {}
};

}  // namespace ikwsms
