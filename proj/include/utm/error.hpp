#pragma once

#include <stdexcept>
#include <string>

namespace utm {

enum class ErrorKind {
  validation,       // malformed input or parameter out of range
  domain,           // spectral point outside the transform's validity region
  horizon,          // time beyond the signal horizon
  truncation,       // half-line tail cannot be truncated reliably
  pole_proximity,   // spectral point too close to a zero of e^{iλL} - e^{-iλL}
  accuracy,         // quadrature / contour parameters insufficient
  rank_collapse,    // least-squares system is rank deficient
  certificate,      // experiment refused because the datum is not obstructed
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::validation, what);
}

}  // namespace utm
