#pragma once

#include "atomdeconv/noise.hpp"
#include "atomdeconv/numerics.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <cstdint>
#include <span>
#include <vector>

namespace atomdeconv::lowerbound {

using Complex = std::complex<double>;

//! Parameters (lambda, delta, alpha) of the two alternatives
//! p_1 = exp(-lambda - delta^{alpha+1/2}) and p_2 = exp(-lambda).
//! delta = 0 is admitted as the degenerate "same model" pair.
class AlternativePair
{
public:
  AlternativePair(double lambda, double delta, double alpha);

  double lambda() const { return lambda_; }
  double delta() const { return delta_; }
  double alpha() const { return alpha_; }

  //! delta^{alpha + 1/2}
  double shift() const { return shift_; }
  double lambda1() const { return lambda_ + shift_; }
  double lambda2() const { return lambda_; }
  double p1() const { return std::exp(-lambda1()); }
  double p2() const { return std::exp(-lambda2()); }

private:
  double lambda_;
  double delta_;
  double alpha_;
  double shift_;
};

//! Flat-top function: 1 on [-1, 1], 0 outside [-2, 2], joined by the smooth
//! partition h(s) = q(1-s) / (q(s) + q(1-s)) with q(s) = exp(-1/s).
class FlatTop
{
public:
  double operator()(double t) const;
  static double transition(double s);

  double inner() const { return 1.0; }
  double outer() const { return 2.0; }
};

FlatTop
flat_top_H();

//! exp(-|t|), the Cauchy CF.
double
phi_g1(double t);

//! CF of a compound Poisson(lambda) sum with summand CF value `phi_g`,
//! conditioned on at least one summand: (e^{lambda phi_g} - 1)/(e^lambda - 1).
double
poisson_sum_cf(double phi_g, double lambda);

double
phi_f1(double t, const AlternativePair& pair);

//! (delta^{alpha+1/2} / lambda_2) (phi_g1(t) - 1) phi_H(delta t)
double
tau(double t, const AlternativePair& pair, const FlatTop& H);

//! phi_g1 + tau
double
phi_g2(double t, const AlternativePair& pair, const FlatTop& H);

double
phi_f2(double t, const AlternativePair& pair, const FlatTop& H);

enum class Alternative
{
  Q1,
  Q2
};

using NoiseCf = std::function<Complex(double)>;

//! (p_j + (1 - p_j) phi_{f_j}(t)) phi_Z(t)
Complex
phi_q(double t,
      Alternative which,
      const AlternativePair& pair,
      const FlatTop& H,
      const NoiseCf& noise_cf);

//! phi_q2(t) - phi_q1(t) without cancellation: the exponents of the two
//! compound Poisson CFs differ by shift (phi_g1 - 1)(phi_H(delta t) - 1).
Complex
phi_q_difference(double t,
                 const AlternativePair& pair,
                 const FlatTop& H,
                 const NoiseCf& noise_cf);

struct ChiSquare
{
  double chi_sq;     // trapezoid integral of (q2 - q1)^2 / q1 on [-cutoff, cutoff]
  double tail_bound; // bound on the contribution of |x| > cutoff
  double min_q1;     // smallest inverted q1 on the grid
};

inline constexpr double kTailShiftA = 5.0;

//! chi^2(q2, q1) from the inverted observation densities. Throws
//! DensityNonPositive when the inverted q1 is not positive somewhere.
ChiSquare
chi_sq_divergence(const AlternativePair& pair,
                  const FlatTop& H,
                  const noise::NoiseModel& noise,
                  double cutoff = 50.0,
                  double grid_step = 0.02,
                  std::size_t quad_nodes = 16384);

//! |p2 - p1| = e^{-lambda} (1 - e^{-delta^{alpha+1/2}})
double
separation(const AlternativePair& pair);

enum class DeltaMode
{
  SupersmoothLog, // c (log n)^{-1/2}, 0 < c < 1
  OrdinaryPoly    // c n^{-1/(2 alpha + 2 beta)}, beta > 1/2
};

double
delta_schedule(std::uint64_t n,
               DeltaMode mode,
               double c,
               double alpha,
               double beta = 0.0);

//! Inverse transform of phi_g2 on a grid.
std::vector<double>
inverted_g2(const AlternativePair& pair,
            const FlatTop& H,
            std::span<const double> grid,
            std::size_t quad_nodes = 16384);

struct DivergenceRow
{
  double delta;
  std::uint64_t n;
  double chi_sq;
  double n_times_chi_sq;
  double separation;
  double tail_bound;
};

struct DivergenceStudy
{
  double lambda = 1.0;
  double alpha = 0.5;
  DeltaMode mode = DeltaMode::SupersmoothLog;
  double c = 0.5;
  double beta = 0.0;
  double cutoff = 50.0;
  double grid_step = 0.02;
  std::size_t quad_nodes = 16384;
};

std::vector<DivergenceRow>
divergence_table(const DivergenceStudy& study,
                 const noise::NoiseModel& noise,
                 const std::vector<std::uint64_t>& ns);

} // namespace atomdeconv::lowerbound
