#include "atomdeconv/tuning.hpp"

#include "atomdeconv/error.hpp"

#include <cmath>
#include <string>

namespace atomdeconv::tuning {

double
g_ordinary(std::uint64_t n, double alpha, double beta, double d)
{
  require(n >= 1, "n must be at least 1");
  require(alpha > 0.0 && beta > 0.0 && d > 0.0,
          "g_ordinary needs alpha, beta, d > 0");
  return d * std::pow(static_cast<double>(n), -1.0 / (2.0 * alpha + 2.0 * beta));
}

double
g_supersmooth(std::uint64_t n, double beta, double gamma)
{
  require(n >= 2, "g_supersmooth needs n >= 2");
  require(beta > 0.0 && gamma > 0.0, "g_supersmooth needs beta, gamma > 0");
  return std::pow(4.0 / gamma, 1.0 / beta) *
         std::pow(std::log(static_cast<double>(n)), -1.0 / beta);
}

double
h_ordinary(std::uint64_t n, double alpha, double beta, double d)
{
  require(n >= 2, "h_ordinary needs n >= 2");
  require(alpha > 0.0 && beta > 0.0 && d > 0.0,
          "h_ordinary needs alpha, beta, d > 0");
  const auto second = static_cast<double>(n - n / 2);
  return d * std::pow(second, -1.0 / (2.0 * alpha + 2.0 * beta + 1.0));
}

double
epsilon_schedule(std::uint64_t n)
{
  require(n >= 1, "n must be at least 1");
  return 1.0 / std::log(3.0 * static_cast<double>(n));
}

RateDescriptor
theoretical_rate(const RateTarget& target)
{
  require(target.alpha > 0.0, "alpha must be positive");
  noise::validate(target.noise_class);
  const double a = target.alpha;
  const double b = noise::decay_exponent(target.noise_class);
  const bool atom = target.quantity == Quantity::AtomP;
  if (noise::is_ordinary(target.noise_class)) {
    const double e = atom ? -(2.0 * a + 1.0) / (2.0 * a + 2.0 * b)
                          : -2.0 * a / (2.0 * a + 2.0 * b + 1.0);
    return { RateScale::PolyInN, e };
  }
  const double e = atom ? -(2.0 * a + 1.0) / b : -2.0 * a / b;
  return { RateScale::LogInN, e };
}

Preset
parse_preset(std::string_view name)
{
  if (name == "thm1-ordinary")
    return Preset::Thm1Ordinary;
  if (name == "thm1-supersmooth")
    return Preset::Thm1Supersmooth;
  if (name == "thm2-ordinary")
    return Preset::Thm2Ordinary;
  if (name == "thm2-supersmooth")
    return Preset::Thm2Supersmooth;
  throw Error(ErrorCode::ParseError,
              "unknown preset '" + std::string(name) + "'");
}

std::string_view
to_string(Preset preset)
{
  switch (preset) {
    case Preset::Thm1Ordinary:
      return "thm1-ordinary";
    case Preset::Thm1Supersmooth:
      return "thm1-supersmooth";
    case Preset::Thm2Ordinary:
      return "thm2-ordinary";
    case Preset::Thm2Supersmooth:
      return "thm2-supersmooth";
  }
  return "unknown";
}

Quantity
quantity_of(Preset preset)
{
  return (preset == Preset::Thm1Ordinary || preset == Preset::Thm1Supersmooth)
           ? Quantity::AtomP
           : Quantity::DensityF;
}

Preset
auto_preset(const noise::SmoothnessClass& cls, Quantity quantity)
{
  const bool ordinary = noise::is_ordinary(cls);
  if (quantity == Quantity::AtomP)
    return ordinary ? Preset::Thm1Ordinary : Preset::Thm1Supersmooth;
  return ordinary ? Preset::Thm2Ordinary : Preset::Thm2Supersmooth;
}

Schedule
schedule_for(Preset preset,
             std::uint64_t n,
             double alpha,
             const noise::SmoothnessClass& cls,
             double d)
{
  const bool ordinary_preset =
    preset == Preset::Thm1Ordinary || preset == Preset::Thm2Ordinary;
  require(ordinary_preset == noise::is_ordinary(cls),
          std::string("preset ") + std::string(to_string(preset)) +
            " does not match the noise smoothness class");
  const double eps = epsilon_schedule(n);

  switch (preset) {
    case Preset::Thm1Ordinary: {
      const double beta = std::get<noise::OrdinarySmooth>(cls).beta;
      const double g = g_ordinary(n, alpha, beta, d);
      return { g, g, eps, false };
    }
    case Preset::Thm2Ordinary: {
      const double beta = std::get<noise::OrdinarySmooth>(cls).beta;
      require(n >= 2, "thm2-ordinary needs n >= 2 for the sample split");
      const double g = g_ordinary(n / 2, alpha, beta, d);
      const double h = h_ordinary(n, alpha, beta, d);
      return { g, h, eps, true };
    }
    case Preset::Thm1Supersmooth:
    case Preset::Thm2Supersmooth: {
      const auto& ss = std::get<noise::Supersmooth>(cls);
      const double g = g_supersmooth(n, ss.beta, ss.gamma);
      return { g, g, eps, false };
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown preset");
}

} // namespace atomdeconv::tuning
