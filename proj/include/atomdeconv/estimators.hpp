#pragma once

#include "atomdeconv/kernels.hpp"
#include "atomdeconv/noise.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace atomdeconv::estimators {

using Complex = std::complex<double>;
using kernels::FourierKernel;
using noise::NoiseModel;

//! Observations X_1, ..., X_n (all finite, n >= 1).
class Sample
{
public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  //! X_1 .. X_{floor(n/2)}
  std::span<const double> first_part() const;
  //! X_{floor(n/2)+1} .. X_n
  std::span<const double> second_part() const;

private:
  std::vector<double> values_;
};

struct EstimationConfig
{
  double g = 0.5;          // bandwidth of the atom-mass estimator
  double h = 0.5;          // bandwidth of the density estimator
  double epsilon = 0.1;    // truncation level, in (0, 1)
  bool split = false;      // p from the first part, ECF from the second
  std::size_t quad_nodes = 4096;
  double tolerance = 1e-7; // relative tolerance of the refinement check

  void validate() const;
};

struct DensityEstimate
{
  std::vector<double> grid;
  std::vector<double> values;
  EstimationConfig config;
  double p_hat_used = 0.0;
  double max_imag_residue = 0.0;
};

//! n^{-1} sum_j exp(i t X_j)
Complex
ecf(const Sample& sample, double t);

//! ECF at the nodes k * step, k = 0..count-1.
std::vector<Complex>
ecf_on_nodes(std::span<const double> xs, double step, std::size_t count);

struct AtomEstimate
{
  double value;        // refined Simpson value (2 * quad_nodes panels on [0, 1/g])
  double coarse;       // quad_nodes panels
  double imag_residue; // imaginary part of the two-sided integral
};

//! Atom-mass estimate (g/2) int_{-1/g}^{1/g} phi_emp(t) phi_u(gt) / phi_Z(t) dt.
//!
//! The integral is folded onto [0, 1/g] and evaluated with composite Simpson
//! at quad_nodes and 2 * quad_nodes panels. If the two disagree by more than
//! tolerance * max(1, |value|) the estimate throws QuadratureNotConverged;
//! a noise CF below 1e-300 at any node throws NoiseCfUnderflow.
AtomEstimate
estimate_p_detailed(std::span<const double> xs,
                    double g,
                    const FourierKernel& u,
                    const NoiseModel& noise,
                    std::size_t quad_nodes = 4096,
                    double tolerance = 1e-7);

double
estimate_p_raw(const Sample& sample,
               double g,
               const FourierKernel& u,
               const NoiseModel& noise,
               std::size_t quad_nodes = 4096);

//! max(-1 + epsilon, min(p_raw, 1 - epsilon))
double
clamp_p(double p_raw, double epsilon);

//! max(0, p_raw)
double
positive_part_p(double p_raw);

struct DeconvolvedValues
{
  std::vector<double> values;
  double max_imag_residue;
};

//! (1/2pi) int e^{-itx} (phi_emp(t) - p_hat phi_Z(t)) / ((1 - p_hat) phi_Z(t))
//! phi_w(ht) dt at each grid point, with phi_emp built from `xs` and a given
//! p_hat. Building block of estimate_f.
DeconvolvedValues
deconvolve_density(std::span<const double> xs,
                   double p_hat,
                   double h,
                   const FourierKernel& w,
                   const NoiseModel& noise,
                   std::span<const double> grid,
                   std::size_t quad_nodes = 4096);

//! Density estimate with p_hat = clamp_p(p_raw, epsilon). With config.split
//! the atom mass uses the first floor(n/2) observations and the ECF the rest.
DensityEstimate
estimate_f(const Sample& sample,
           const EstimationConfig& config,
           const FourierKernel& w,
           const FourierKernel& u,
           const NoiseModel& noise,
           std::span<const double> grid);

//! Clips negative values to zero; optionally rescales to unit trapezoid mass
//! (ZeroMass if nothing positive remains).
DensityEstimate
positive_part_density(DensityEstimate estimate, bool renormalize);

} // namespace atomdeconv::estimators
