#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace atomdeconv::numerics {

using Complex = std::complex<double>;
using ComplexFn = std::function<Complex(double)>;
using RealFn = std::function<double(double)>;

inline constexpr double pi = 3.14159265358979323846;

//! Resolution of a composite Simpson rule: `nodes` is the (even) number of
//! panels, `tolerance` the accuracy the caller asks for.
struct QuadratureSpec
{
  std::size_t nodes = 4096;
  double tolerance = 1e-7;

  void validate() const;
};

//! Composite Simpson weights for `panels` panels of width `step`
//! (panels + 1 entries).
std::vector<double>
simpson_weights(std::size_t panels, double step);

//! Composite Simpson over [-halfwidth, halfwidth]. Nodes are placed
//! symmetrically and mirrored pairs are summed first, so odd integrands
//! integrate to exactly zero.
Complex
integrate_symmetric(const ComplexFn& f,
                    double halfwidth,
                    const QuadratureSpec& spec);

//! Node count for inverting over [0, cutoff] onto points with |x| <= max_abs_x:
//! at least eight nodes per oscillation period and never fewer than `base`.
std::size_t
oscillation_nodes(double cutoff, double max_abs_x, std::size_t base);

//! (1/2pi) int_{-cutoff}^{cutoff} e^{-itx} cf(t) dt at every grid point,
//! complex-valued. The integral is folded onto [0, cutoff] using cf(t) and
//! cf(-t), so a kink of cf at the origin costs no accuracy.
std::vector<Complex>
invert_cf_on_grid_complex(const ComplexFn& cf,
                          std::span<const double> grid,
                          double cutoff,
                          const QuadratureSpec& spec);

//! Real part of invert_cf_on_grid_complex.
std::vector<double>
invert_cf_on_grid(const ComplexFn& cf,
                  std::span<const double> grid,
                  double cutoff,
                  const QuadratureSpec& spec);

//! Trapezoid rule on a strictly increasing grid.
double
trapezoid_mass(std::span<const double> grid, std::span<const double> values);

//! Uniform grid from `lo` to `hi` (inclusive) with the given step.
std::vector<double>
uniform_grid(double lo, double hi, double step);

// -- fast phasor kernels ----------------------------------------------------
//
// Both kernels walk e^{ik theta} by complex rotation and recompute the phasor
// exactly every `kReanchor` steps, which bounds the accumulated rounding to a
// few ulps per block.

inline constexpr std::size_t kReanchor = 64;

//! acc[k] += sum_j exp(i * k * step * xs[j]) for k = 0..acc.size()-1.
void
accumulate_phasors(std::span<const double> xs,
                   double step,
                   std::span<Complex> acc);

//! sum_k coeffs[k] * exp(i * k * theta).
Complex
phase_sum(std::span<const Complex> coeffs, double theta);

} // namespace atomdeconv::numerics
