#include "atomdeconv/estimators.hpp"

#include "atomdeconv/error.hpp"
#include "atomdeconv/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace atomdeconv::estimators {

using numerics::pi;

Sample::Sample(std::vector<double> values)
  : values_(std::move(values))
{
  require(!values_.empty(), "sample must contain at least one observation");
  for (double v : values_)
    require(std::isfinite(v), "sample values must be finite");
}

std::span<const double>
Sample::first_part() const
{
  return std::span<const double>(values_).first(values_.size() / 2);
}

std::span<const double>
Sample::second_part() const
{
  return std::span<const double>(values_).subspan(values_.size() / 2);
}

void
EstimationConfig::validate() const
{
  require(g > 0.0 && std::isfinite(g), "bandwidth g must be positive");
  require(h > 0.0 && std::isfinite(h), "bandwidth h must be positive");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(quad_nodes >= 16 && quad_nodes % 2 == 0,
          "quad_nodes must be even and >= 16");
  require(tolerance > 0.0, "tolerance must be positive");
}

Complex
ecf(const Sample& sample, double t)
{
  Complex sum = 0.0;
  for (double x : sample.values())
    sum += std::polar(1.0, t * x);
  return sum / static_cast<double>(sample.size());
}

std::vector<Complex>
ecf_on_nodes(std::span<const double> xs, double step, std::size_t count)
{
  require(!xs.empty(), "ECF needs at least one observation");
  std::vector<Complex> acc(count, Complex(0.0, 0.0));
  numerics::accumulate_phasors(xs, step, acc);
  const double inv_n = 1.0 / static_cast<double>(xs.size());
  for (auto& v : acc)
    v *= inv_n;
  return acc;
}

namespace {

void
require_nodes(std::size_t quad_nodes)
{
  require(quad_nodes >= 16 && quad_nodes % 2 == 0,
          "quad_nodes must be even and >= 16");
}

void
require_grid(std::span<const double> grid)
{
  require(!grid.empty(), "evaluation grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]), "grid values must be finite");
    if (i > 0)
      require(grid[i] > grid[i - 1], "grid must be strictly increasing");
  }
}

} // namespace

AtomEstimate
estimate_p_detailed(std::span<const double> xs,
                    double g,
                    const FourierKernel& u,
                    const NoiseModel& noise,
                    std::size_t quad_nodes,
                    double tolerance)
{
  require(g > 0.0 && std::isfinite(g), "bandwidth g must be positive");
  require(u.kind() == kernels::KernelKind::AtomKernelU,
          "atom-mass estimator needs a u kernel");
  require_nodes(quad_nodes);
  require(!xs.empty(), "sample must not be empty");

  const std::size_t fine = 2 * quad_nodes;
  const double step = 1.0 / (g * static_cast<double>(fine));
  const auto phi_emp = ecf_on_nodes(xs, step, fine + 1);

  // Folded integrand psi(t) + psi(-t) on the fine nodes.
  std::vector<Complex> folded(fine + 1);
  for (std::size_t k = 0; k <= fine; ++k) {
    const double t = step * static_cast<double>(k);
    const double ku = u(g * t);
    const Complex zp = noise.cf_checked(t);
    const Complex zm = noise.cf_checked(-t);
    folded[k] = ku * (phi_emp[k] / zp + std::conj(phi_emp[k]) / zm);
  }

  const auto w_fine = numerics::simpson_weights(fine, step);
  const auto w_coarse = numerics::simpson_weights(quad_nodes, 2.0 * step);
  Complex s_fine = 0.0;
  Complex s_coarse = 0.0;
  for (std::size_t k = 0; k <= fine; ++k)
    s_fine += w_fine[k] * folded[k];
  for (std::size_t k = 0; k <= quad_nodes; ++k)
    s_coarse += w_coarse[k] * folded[2 * k];
  s_fine *= 0.5 * g;
  s_coarse *= 0.5 * g;

  if (!std::isfinite(s_fine.real()) || !std::isfinite(s_coarse.real()))
    throw Error(ErrorCode::NonFiniteIntegrand,
                "atom-mass integrand is not finite");
  const double diff = std::abs(s_fine.real() - s_coarse.real());
  if (diff > tolerance * std::max(1.0, std::abs(s_fine.real())))
    throw Error(ErrorCode::QuadratureNotConverged,
                "atom-mass quadrature changed by " + show(diff) +
                  " between " + std::to_string(quad_nodes) + " and " +
                  std::to_string(fine) + " panels");
  return { s_fine.real(), s_coarse.real(), s_fine.imag() };
}

double
estimate_p_raw(const Sample& sample,
               double g,
               const FourierKernel& u,
               const NoiseModel& noise,
               std::size_t quad_nodes)
{
  return estimate_p_detailed(sample.values(), g, u, noise, quad_nodes).value;
}

double
clamp_p(double p_raw, double epsilon)
{
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  return std::max(-1.0 + epsilon, std::min(p_raw, 1.0 - epsilon));
}

double
positive_part_p(double p_raw)
{
  return std::max(0.0, p_raw);
}

DeconvolvedValues
deconvolve_density(std::span<const double> xs,
                   double p_hat,
                   double h,
                   const FourierKernel& w,
                   const NoiseModel& noise,
                   std::span<const double> grid,
                   std::size_t quad_nodes)
{
  require(h > 0.0 && std::isfinite(h), "bandwidth h must be positive");
  require(p_hat < 1.0 && p_hat > -1.0, "p_hat must lie in (-1, 1)");
  require(w.kind() == kernels::KernelKind::DensityKernelW,
          "density estimator needs a w kernel");
  require_nodes(quad_nodes);
  require_grid(grid);

  const std::size_t n = quad_nodes;
  const double step = 1.0 / (h * static_cast<double>(n));
  const auto phi_emp = ecf_on_nodes(xs, step, n + 1);
  const auto weights = numerics::simpson_weights(n, step);
  const double scale = 1.0 / (1.0 - p_hat);

  std::vector<Complex> pos(n + 1), neg(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = step * static_cast<double>(k);
    const double kw = w(h * t);
    const Complex zp = noise.cf_checked(t);
    const Complex zm = noise.cf_checked(-t);
    pos[k] = weights[k] * kw * scale * (phi_emp[k] / zp - p_hat);
    neg[k] = weights[k] * kw * scale * (std::conj(phi_emp[k]) / zm - p_hat);
  }

  DeconvolvedValues out{ std::vector<double>(grid.size()), 0.0 };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double theta = step * grid[i];
    const Complex v =
      (numerics::phase_sum(pos, -theta) + numerics::phase_sum(neg, theta)) /
      (2.0 * pi);
    if (!std::isfinite(v.real()))
      throw Error(ErrorCode::NonFiniteIntegrand,
                  "density integrand is not finite");
    out.values[i] = v.real();
    out.max_imag_residue = std::max(out.max_imag_residue, std::abs(v.imag()));
  }
  return out;
}

DensityEstimate
estimate_f(const Sample& sample,
           const EstimationConfig& config,
           const FourierKernel& w,
           const FourierKernel& u,
           const NoiseModel& noise,
           std::span<const double> grid)
{
  config.validate();
  if (config.split && sample.size() < 2)
    throw Error(ErrorCode::DegenerateSplit,
                "sample splitting needs at least two observations");

  const auto p_part = config.split ? sample.first_part() : sample.values();
  const auto ecf_part = config.split ? sample.second_part() : sample.values();

  const double p_raw = estimate_p_detailed(
                         p_part, config.g, u, noise, config.quad_nodes,
                         config.tolerance)
                         .value;
  const double p_hat = clamp_p(p_raw, config.epsilon);
  auto values =
    deconvolve_density(ecf_part, p_hat, config.h, w, noise, grid,
                       config.quad_nodes);

  DensityEstimate est;
  est.grid.assign(grid.begin(), grid.end());
  est.values = std::move(values.values);
  est.config = config;
  est.p_hat_used = p_hat;
  est.max_imag_residue = values.max_imag_residue;
  return est;
}

DensityEstimate
positive_part_density(DensityEstimate estimate, bool renormalize)
{
  require(estimate.grid.size() == estimate.values.size(),
          "density estimate grid and values differ in length");
  for (auto& v : estimate.values)
    v = std::max(0.0, v);
  if (!renormalize)
    return estimate;
  const double mass = estimate.grid.size() >= 2
                        ? numerics::trapezoid_mass(estimate.grid,
                                                   estimate.values)
                        : 0.0;
  if (!(mass > 0.0))
    throw Error(ErrorCode::ZeroMass,
                "clipped density has no mass left to renormalize");
  for (auto& v : estimate.values)
    v /= mass;
  return estimate;
}

} // namespace atomdeconv::estimators
