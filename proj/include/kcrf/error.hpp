#ifndef KCRF_ERROR_HPP_
#define KCRF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace kcrf {

// Base class for all errors raised by the toolkit. The kind maps directly to
// the command-line exit code.
class Error : public std::runtime_error {
 public:
  enum class Kind { kValidation = 1, kIo = 2, kNumerical = 3 };

  Error(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  Kind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &what)
      : Error(Kind::kValidation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error(Kind::kIo, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string &what)
      : Error(Kind::kNumerical, what) {}
};

}  // namespace kcrf

#endif  // KCRF_ERROR_HPP_
