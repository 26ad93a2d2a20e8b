#include "atomdeconv/noise.hpp"

#include "atomdeconv/error.hpp"
#include "atomdeconv/numerics.hpp"

#include <charconv>
#include <cmath>

namespace atomdeconv::noise {

void
validate(const SmoothnessClass& cls)
{
  if (const auto* os = std::get_if<OrdinarySmooth>(&cls)) {
    require(os->d0 > 0.0, "ordinary smooth noise needs d0 > 0");
    require(os->beta > 1.0,
            "ordinary smooth noise needs beta > 1 for an integrable CF");
  } else {
    const auto& ss = std::get<Supersmooth>(cls);
    require(ss.d0 > 0.0 && ss.beta > 0.0 && ss.gamma > 0.0,
            "supersmooth noise needs d0, beta, gamma > 0");
    require(std::isfinite(ss.beta0), "supersmooth beta0 must be finite");
  }
}

double
decay_exponent(const SmoothnessClass& cls)
{
  return std::visit([](const auto& c) { return c.beta; }, cls);
}

NoiseModel::NoiseModel(std::string name,
                       CfFn cf,
                       SmoothnessClass classification,
                       SamplerFn sampler,
                       DensityFn density)
  : name_(std::move(name))
  , cf_(std::move(cf))
  , classification_(classification)
  , sampler_(std::move(sampler))
  , density_(std::move(density))
{
  require(static_cast<bool>(cf_) && static_cast<bool>(sampler_),
          "noise model needs a CF and a sampler");
  validate(classification_);
}

Complex
NoiseModel::cf_checked(double t) const
{
  const Complex v = cf_(t);
  if (!(std::abs(v) >= kCfFloor))
    throw Error(ErrorCode::NoiseCfUnderflow,
                "noise CF " + name_ + " underflows at t = " +
                  show(t));
  return v;
}

double
NoiseModel::density(double x) const
{
  require(has_density(), "noise model " + name_ + " has no density");
  return density_(x);
}

NoiseModel
gaussian_noise(double sigma)
{
  require(sigma > 0.0 && std::isfinite(sigma),
          "gaussian noise needs sigma > 0");
  const double s2 = sigma * sigma;
  return {
    "gaussian:" + show(sigma),
    [s2](double t) { return Complex(std::exp(-0.5 * s2 * t * t), 0.0); },
    Supersmooth{ 1.0, 0.0, 2.0, 2.0 / s2 },
    [sigma](Rng& rng) { return std::normal_distribution<double>(0.0, sigma)(rng); },
    [sigma](double x) {
      const double z = x / sigma;
      return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * numerics::pi));
    }
  };
}

NoiseModel
laplace_noise(double b)
{
  require(b > 0.0 && std::isfinite(b), "laplace noise needs b > 0");
  const double b2 = b * b;
  // inf_{|t|>=1} |t|^2 / (1 + b^2 t^2) is attained at |t| = 1.
  const double d0 = 1.0 / (1.0 + b2);
  return {
    "laplace:" + show(b),
    [b2](double t) { return Complex(1.0 / (1.0 + b2 * t * t), 0.0); },
    OrdinarySmooth{ d0, 2.0 },
    [b](Rng& rng) {
      std::exponential_distribution<double> e(1.0);
      const double a = e(rng);
      const double c = e(rng);
      return b * (a - c);
    },
    [b](double x) { return std::exp(-std::abs(x) / b) / (2.0 * b); }
  };
}

NoiseModel
custom_noise(std::string name,
             NoiseModel::CfFn cf,
             SmoothnessClass classification,
             NoiseModel::SamplerFn sampler,
             NoiseModel::DensityFn density)
{
  require(static_cast<bool>(cf), "custom noise needs a CF");
  const Complex at_zero = cf(0.0);
  if (!(std::abs(at_zero - Complex(1.0, 0.0)) <= 1e-12))
    throw Error(ErrorCode::CfNotOneAtZero,
                "custom noise " + name + " has cf(0) = " +
                  show(at_zero.real()) + " + " +
                  show(at_zero.imag()) + "i");
  for (double t : { 0.25, 1.0, 3.0 }) {
    const Complex a = cf(t);
    const Complex b = cf(-t);
    require(std::abs(b - std::conj(a)) <= 1e-12 * (1.0 + std::abs(a)),
            "custom noise " + name + " CF is not Hermitian at t = " +
              show(t));
  }
  return { std::move(name),
           std::move(cf),
           classification,
           std::move(sampler),
           std::move(density) };
}

std::vector<double>
sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed)
{
  require(n >= 1, "sample size must be at least 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out)
    v = model.draw(rng);
  return out;
}

NoiseModel
parse_noise(std::string_view spec)
{
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::ParseError,
                "noise spec '" + std::string(spec) +
                  "' must look like gaussian:<sigma> or laplace:<b>");
  const auto family = spec.substr(0, colon);
  const auto rest = spec.substr(colon + 1);
  double value = 0.0;
  const auto [ptr, ec] =
    std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr != rest.data() + rest.size())
    throw Error(ErrorCode::ParseError,
                "cannot parse noise parameter in '" + std::string(spec) + "'");
  if (family == "gaussian")
    return gaussian_noise(value);
  if (family == "laplace")
    return laplace_noise(value);
  throw Error(ErrorCode::ParseError,
              "unknown noise family '" + std::string(family) + "'");
}

} // namespace atomdeconv::noise
