#ifndef INFOFLOW_ERROR_HPP
#define INFOFLOW_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace infoflow {

// Base for all domain failures. Precondition violations use
// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A variable (column) with zero variance, or a subset whose covariance block
// is not positive definite.
class DegenerateError : public Error {
 public:
  DegenerateError(const std::string& what, std::string variable = {})
      : Error(what), variable_(std::move(variable)) {}
  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

// A quantity that must be nonnegative (or two routes that must agree) came out
// inconsistent beyond rounding tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

struct Diagnostic {
  std::string code;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline void emit(Diagnostics* sink, std::string code, std::string message) {
  if (sink != nullptr) sink->push_back({std::move(code), std::move(message)});
}

}  // namespace infoflow

#endif  // INFOFLOW_ERROR_HPP
