#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hollowpca {

enum class ErrorKind {
  InvalidParameter,
  ConvergenceFailure,
  IndexOutOfRange,
  RankDeficient,
  NonpositiveEigenvalue,
  DegenerateSpectrum,
  ZeroEigengap,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated. The experiment harness records DegenerateSpectrum
/// and ConvergenceFailure per replicate instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const char* what) {
  if (!ok) fail(kind, what);
}

}  // namespace hollowpca
