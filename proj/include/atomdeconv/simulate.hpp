#pragma once

#include "atomdeconv/error.hpp"
#include "atomdeconv/estimators.hpp"
#include "atomdeconv/kernels.hpp"
#include "atomdeconv/noise.hpp"
#include "atomdeconv/tuning.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace atomdeconv::simulate {

using Complex = std::complex<double>;
using noise::Rng;

//! Density f of the continuous part V, with its CF, a sampler and a
//! Sobolev-type certificate int |phi_f|^2 (1 + |t|^{2 alpha}) dt <= K_sigma.
struct TargetDensity
{
  std::string name;
  std::function<double(double)> density;
  std::function<Complex(double)> cf;
  std::function<double(Rng&)> sampler;
  double sobolev_alpha = 0.0;
  double k_sigma = 0.0;
};

//! int_{-cutoff}^{cutoff} |cf(t)|^2 (1 + |t|^{2 alpha}) dt by Simpson.
double
sobolev_integral(const std::function<Complex(double)>& cf,
                 double alpha,
                 double cutoff,
                 std::size_t nodes = 1 << 16);

//! "std-normal" and "cauchy", certified for the given alpha.
std::vector<TargetDensity>
builtin_targets(double alpha);

TargetDensity
lookup_target(std::string_view name, double alpha);

//! X = A V + Z with P(A = 0) = p.
struct ModelSpec
{
  double p;
  TargetDensity target;
  noise::NoiseModel noise;

  void validate() const;
};

struct LatentDraws
{
  estimators::Sample sample;
  std::vector<std::uint8_t> atom; // 1 where A = 0 (the draw sits on the atom)
};

LatentDraws
sample_model_latent(const ModelSpec& spec, std::size_t n, std::uint64_t seed);

estimators::Sample
sample_model(const ModelSpec& spec, std::size_t n, std::uint64_t seed);

//! Seed of replicate `rep` at sample size `n` derived from the master seed.
std::uint64_t
replicate_seed(std::uint64_t master, std::uint64_t n, std::uint64_t rep);

enum class AtomVariant
{
  raw,
  clamped,
  positive
};

AtomVariant
parse_variant(std::string_view name);

std::string_view
to_string(AtomVariant variant);

struct RiskRow
{
  std::uint64_t n = 0;
  double risk_mean = 0.0;
  double risk_se = 0.0;
  std::size_t replicates = 0;
  //! Empty unless an estimator error aborted the row.
  std::string diagnostic;
  ErrorCode failure = ErrorCode::InvalidArgument; // meaningful when !ok()

  bool ok() const { return diagnostic.empty(); }
};

struct AtomReplicate
{
  double p_raw;
  double p_clamped;
  double p_plus;
};

struct RiskReport
{
  tuning::Quantity quantity = tuning::Quantity::AtomP;
  std::uint64_t seed = 0;
  std::vector<RiskRow> rows;
  //! Per-row replicate estimates (atom-mass runs only).
  std::vector<std::vector<AtomReplicate>> atom_replicates;
};

struct ExperimentConfig
{
  tuning::Preset preset = tuning::Preset::Thm1Ordinary;
  double alpha = 6.0;
  double d = 1.0;
  std::size_t quad_nodes = 4096;
  unsigned threads = 1;
  kernels::FourierKernel u = kernels::paper_u_kernel();
  kernels::FourierKernel w = kernels::poly_w_kernel(6.0);
};

//! Monte-Carlo MSE of the chosen atom-mass variant at each n.
RiskReport
mc_risk_p(const ModelSpec& spec,
          const std::vector<std::uint64_t>& ns,
          std::size_t replicates,
          const ExperimentConfig& config,
          AtomVariant variant,
          std::uint64_t seed);

//! Monte-Carlo MISE (trapezoid on `grid`) of the density estimator.
//! GridTooNarrow when the target puts less than 0.999 mass on the grid.
RiskReport
mc_risk_f(const ModelSpec& spec,
          const std::vector<std::uint64_t>& ns,
          std::size_t replicates,
          const ExperimentConfig& config,
          const std::vector<double>& grid,
          std::uint64_t seed);

struct RateFit
{
  double slope;
  double intercept;
  double r_squared;
};

//! Least squares of log(risk) on log n (PolyInN) or log log n (LogInN).
RateFit
fit_rate(const RiskReport& report, tuning::RateScale scale);

//! True when risk_{k+1} <= risk_k + 2 sqrt(se_k^2 + se_{k+1}^2) for all k;
//! false as soon as any row was aborted.
bool
non_increasing_within_2se(const RiskReport& report);

} // namespace atomdeconv::simulate
