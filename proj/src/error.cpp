#include "atomdeconv/error.hpp"

#include <charconv>

namespace atomdeconv {

std::string_view
to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::IntegralNotTwo:
      return "IntegralNotTwo";
    case ErrorCode::RatioUnbounded:
      return "RatioUnbounded";
    case ErrorCode::NotOneAtZero:
      return "NotOneAtZero";
    case ErrorCode::CfNotOneAtZero:
      return "CfNotOneAtZero";
    case ErrorCode::NoiseCfUnderflow:
      return "NoiseCfUnderflow";
    case ErrorCode::QuadratureNotConverged:
      return "QuadratureNotConverged";
    case ErrorCode::DegenerateSplit:
      return "DegenerateSplit";
    case ErrorCode::ZeroMass:
      return "ZeroMass";
    case ErrorCode::NonFiniteIntegrand:
      return "NonFiniteIntegrand";
    case ErrorCode::LengthMismatch:
      return "LengthMismatch";
    case ErrorCode::GridTooNarrow:
      return "GridTooNarrow";
    case ErrorCode::NonPositiveRisk:
      return "NonPositiveRisk";
    case ErrorCode::DensityNonPositive:
      return "DensityNonPositive";
    case ErrorCode::ParseError:
      return "ParseError";
    case ErrorCode::IoError:
      return "IoError";
  }
  return "Unknown";
}

ErrorCategory
category_of(ErrorCode code)
{
  switch (code) {
    case ErrorCode::NoiseCfUnderflow:
    case ErrorCode::QuadratureNotConverged:
    case ErrorCode::NonFiniteIntegrand:
    case ErrorCode::DensityNonPositive:
      return ErrorCategory::numerical;
    default:
      return ErrorCategory::validation;
  }
}

std::string
show(double value)
{
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, value).ptr;
  return std::string(buf, end);
}

} // namespace atomdeconv
