#pragma once

#include <stdexcept>
#include <string>

namespace volta {

enum class ErrorCode {
  kArgument = 1,
  kIndex,
  kIo,
  kParse,
  kModeling,
  kDegenerate,
  kConvergence,
  kDefinedness,
  kBudget,
  kConfig,
  kInternal,
};

const char* error_code_name(ErrorCode code);

// Base exception for every failure raised by the library. The code maps
// one-to-one onto the status values of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by iterative methods that exhaust their budget. Carries the best
// residual reached so callers can decide whether it is usable.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual, std::size_t iterations)
      : Error(ErrorCode::kConvergence, what),
        best_residual_(best_residual),
        iterations_(iterations) {}

  double best_residual() const noexcept { return best_residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  std::size_t iterations_;
};

}  // namespace volta
