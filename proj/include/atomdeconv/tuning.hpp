#pragma once

#include "atomdeconv/noise.hpp"

#include <cstdint>
#include <string_view>

namespace atomdeconv::tuning {

enum class Quantity
{
  AtomP,
  DensityF
};

enum class RateScale
{
  PolyInN, // risk ~ n^exponent
  LogInN   // risk ~ (log n)^exponent
};

struct RateTarget
{
  double alpha;
  noise::SmoothnessClass noise_class;
  Quantity quantity;
};

struct RateDescriptor
{
  RateScale scale;
  double exponent;
};

//! d n^{-1/(2 alpha + 2 beta)}
double
g_ordinary(std::uint64_t n, double alpha, double beta, double d);

//! (4/gamma)^{1/beta} (log n)^{-1/beta}; n >= 2.
double
g_supersmooth(std::uint64_t n, double beta, double gamma);

//! d (n - floor(n/2))^{-1/(2 alpha + 2 beta + 1)}; n >= 2.
double
h_ordinary(std::uint64_t n, double alpha, double beta, double d);

//! 1 / log(3n)
double
epsilon_schedule(std::uint64_t n);

RateDescriptor
theoretical_rate(const RateTarget& target);

enum class Preset
{
  Thm1Ordinary,
  Thm1Supersmooth,
  Thm2Ordinary,
  Thm2Supersmooth
};

Preset
parse_preset(std::string_view name);

std::string_view
to_string(Preset preset);

//! AtomP for the thm1 presets, DensityF for the thm2 presets.
Quantity
quantity_of(Preset preset);

//! Preset implied by the noise class for the requested quantity.
Preset
auto_preset(const noise::SmoothnessClass& cls, Quantity quantity);

struct Schedule
{
  double g;
  double h;
  double epsilon;
  bool split;
};

//! Bandwidths, truncation level and split flag a preset prescribes at
//! sample size n. Throws if the preset does not match the noise class.
Schedule
schedule_for(Preset preset,
             std::uint64_t n,
             double alpha,
             const noise::SmoothnessClass& cls,
             double d = 1.0);

} // namespace atomdeconv::tuning
