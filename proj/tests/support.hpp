#pragma once

#include "atomdeconv/kernels.hpp"
#include "atomdeconv/noise.hpp"

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace test_support {

using Complex = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

//! Z = 0: cf identically one.
inline atomdeconv::noise::NoiseModel
identity_noise()
{
  return atomdeconv::noise::custom_noise(
    "identity",
    [](double) { return Complex(1.0, 0.0); },
    atomdeconv::noise::OrdinarySmooth{ 1.0, 2.0 },
    [](atomdeconv::noise::Rng&) { return 0.0; });
}

//! Composite Simpson weights on `panels` panels (independent of the library).
inline std::vector<double>
simpson(std::size_t panels, double step)
{
  std::vector<double> w(panels + 1);
  for (std::size_t k = 0; k <= panels; ++k)
    w[k] = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
  for (auto& v : w)
    v *= step / 3.0;
  return w;
}

inline Complex
direct_ecf(std::span<const double> xs, double t)
{
  Complex s = 0.0;
  for (double x : xs)
    s += std::polar(1.0, t * x);
  return s / static_cast<double>(xs.size());
}

//! Brute-force atom-mass estimate: unfolded Simpson over [-1/g, 1/g] with
//! `panels` panels and a directly summed ECF at every node.
inline double
oracle_p(std::span<const double> xs,
         double g,
         const atomdeconv::kernels::FourierKernel& u,
         const atomdeconv::noise::NoiseModel& noise,
         std::size_t panels)
{
  const double a = 1.0 / g;
  const double step = 2.0 * a / static_cast<double>(panels);
  const auto w = simpson(panels, step);
  Complex sum = 0.0;
  for (std::size_t k = 0; k <= panels; ++k) {
    const double t = -a + step * static_cast<double>(k);
    sum += w[k] * direct_ecf(xs, t) * u(g * t) / noise.cf(t);
  }
  return 0.5 * g * sum.real();
}

//! Brute-force density estimate at each x, same conventions as oracle_p.
inline std::vector<double>
oracle_f(std::span<const double> xs,
         double p_hat,
         double h,
         const atomdeconv::kernels::FourierKernel& w_kernel,
         const atomdeconv::noise::NoiseModel& noise,
         std::span<const double> grid,
         std::size_t panels)
{
  const double a = 1.0 / h;
  const double step = 2.0 * a / static_cast<double>(panels);
  const auto w = simpson(panels, step);
  std::vector<Complex> integrand(panels + 1);
  std::vector<double> ts(panels + 1);
  for (std::size_t k = 0; k <= panels; ++k) {
    const double t = -a + step * static_cast<double>(k);
    const Complex z = noise.cf(t);
    ts[k] = t;
    integrand[k] = w[k] * (direct_ecf(xs, t) - p_hat * z) /
                   ((1.0 - p_hat) * z) * w_kernel(h * t);
  }
  std::vector<double> out;
  for (double x : grid) {
    Complex s = 0.0;
    for (std::size_t k = 0; k <= panels; ++k)
      s += std::polar(1.0, -ts[k] * x) * integrand[k];
    out.push_back(s.real() / (2.0 * pi));
  }
  return out;
}

} // namespace test_support
