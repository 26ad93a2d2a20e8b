#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace atomdeconv {

enum class ErrorCode
{
  InvalidArgument,
  IntegralNotTwo,
  RatioUnbounded,
  NotOneAtZero,
  CfNotOneAtZero,
  NoiseCfUnderflow,
  QuadratureNotConverged,
  DegenerateSplit,
  ZeroMass,
  NonFiniteIntegrand,
  LengthMismatch,
  GridTooNarrow,
  NonPositiveRisk,
  DensityNonPositive,
  ParseError,
  IoError
};

//! Broad failure category; the CLI maps it onto its exit code.
enum class ErrorCategory
{
  validation,
  numerical
};

std::string_view to_string(ErrorCode code);
ErrorCategory category_of(ErrorCode code);

//! The single exception type thrown by the library.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

private:
  ErrorCode code_;
};

//! Shortest round-trip text of a double, for diagnostics.
std::string
show(double value);

inline void
require(bool condition, const std::string& what)
{
  if (!condition)
    throw Error(ErrorCode::InvalidArgument, what);
}

} // namespace atomdeconv
