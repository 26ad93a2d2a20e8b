#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace atomdeconv::noise {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

//! |phi_Z(t)| >= d0 |t|^{-beta} as |t| -> infinity.
struct OrdinarySmooth
{
  double d0;
  double beta;
};

//! |phi_Z(t)| >= d0 |t|^{beta0} exp(-|t|^beta / gamma) as |t| -> infinity.
struct Supersmooth
{
  double d0;
  double beta0;
  double beta;
  double gamma;
};

using SmoothnessClass = std::variant<OrdinarySmooth, Supersmooth>;

//! Throws when the class parameters are out of range (beta > 1 for the
//! ordinary smooth case, positive constants otherwise).
void
validate(const SmoothnessClass& cls);

inline bool
is_ordinary(const SmoothnessClass& cls)
{
  return std::holds_alternative<OrdinarySmooth>(cls);
}

double
decay_exponent(const SmoothnessClass& cls);

//! Known distribution of the measurement error Z.
class NoiseModel
{
public:
  using CfFn = std::function<Complex(double)>;
  using SamplerFn = std::function<double(Rng&)>;
  using DensityFn = std::function<double(double)>;

  NoiseModel(std::string name,
             CfFn cf,
             SmoothnessClass classification,
             SamplerFn sampler,
             DensityFn density = {});

  Complex cf(double t) const { return cf_(t); }

  //! cf(t), or NoiseCfUnderflow when |cf(t)| < 1e-300.
  Complex cf_checked(double t) const;

  double draw(Rng& rng) const { return sampler_(rng); }

  bool has_density() const { return static_cast<bool>(density_); }
  double density(double x) const;

  const SmoothnessClass& classification() const { return classification_; }
  const std::string& name() const { return name_; }

private:
  std::string name_;
  CfFn cf_;
  SmoothnessClass classification_;
  SamplerFn sampler_;
  DensityFn density_;
};

inline constexpr double kCfFloor = 1e-300;

//! N(0, sigma^2): supersmooth with beta = 2, gamma = 2 / sigma^2.
NoiseModel
gaussian_noise(double sigma);

//! Laplace(0, b): ordinary smooth with beta = 2.
NoiseModel
laplace_noise(double b);

//! Wraps a user CF after checking cf(0) = 1 (CfNotOneAtZero) and spot-checking
//! Hermitian symmetry.
NoiseModel
custom_noise(std::string name,
             NoiseModel::CfFn cf,
             SmoothnessClass classification,
             NoiseModel::SamplerFn sampler,
             NoiseModel::DensityFn density = {});

//! n i.i.d. draws; identical output for identical (model, n, seed).
std::vector<double>
sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed);

//! "gaussian:<sigma>" or "laplace:<b>".
NoiseModel
parse_noise(std::string_view spec);

} // namespace atomdeconv::noise
