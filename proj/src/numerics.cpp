#include "atomdeconv/numerics.hpp"

#include "atomdeconv/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace atomdeconv::numerics {

void
QuadratureSpec::validate() const
{
  require(nodes >= 16 && nodes % 2 == 0,
          "quadrature nodes must be even and >= 16, got " +
            std::to_string(nodes));
  require(tolerance > 0.0 && std::isfinite(tolerance),
          "quadrature tolerance must be positive");
}

std::vector<double>
simpson_weights(std::size_t panels, double step)
{
  require(panels >= 2 && panels % 2 == 0,
          "Simpson rule needs an even number of panels");
  std::vector<double> w(panels + 1);
  const double third = step / 3.0;
  for (std::size_t k = 0; k <= panels; ++k) {
    if (k == 0 || k == panels)
      w[k] = third;
    else
      w[k] = (k % 2 == 1) ? 4.0 * third : 2.0 * third;
  }
  return w;
}

namespace {

void
check_finite(const Complex& v, double t)
{
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorCode::NonFiniteIntegrand,
                "integrand is not finite at t = " + show(t));
}

} // namespace

Complex
integrate_symmetric(const ComplexFn& f,
                    double halfwidth,
                    const QuadratureSpec& spec)
{
  spec.validate();
  require(halfwidth > 0.0 && std::isfinite(halfwidth),
          "halfwidth must be positive");
  const std::size_t n = spec.nodes;
  const std::size_t half = n / 2;
  const double step = 2.0 * halfwidth / static_cast<double>(n);
  const auto w = simpson_weights(n, step);

  // t_k = halfwidth * (2k - n) / n, so t_{n-k} = -t_k exactly.
  Complex sum = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const double t = halfwidth * (2.0 * static_cast<double>(k) -
                                  static_cast<double>(n)) /
                     static_cast<double>(n);
    const Complex a = f(t);
    const Complex b = f(-t);
    check_finite(a, t);
    check_finite(b, -t);
    sum += w[k] * (a + b);
  }
  const Complex mid = f(0.0);
  check_finite(mid, 0.0);
  sum += w[half] * mid;
  return sum;
}

std::size_t
oscillation_nodes(double cutoff, double max_abs_x, std::size_t base)
{
  const double periods = cutoff * max_abs_x / (2.0 * pi);
  auto needed = static_cast<std::size_t>(std::ceil(8.0 * periods));
  std::size_t nodes = std::max(base, needed);
  if (nodes % 2 == 1)
    ++nodes;
  return std::max<std::size_t>(nodes, 16);
}

std::vector<Complex>
invert_cf_on_grid_complex(const ComplexFn& cf,
                          std::span<const double> grid,
                          double cutoff,
                          const QuadratureSpec& spec)
{
  spec.validate();
  require(cutoff > 0.0 && std::isfinite(cutoff), "cutoff must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "grid must be strictly increasing");

  double max_abs_x = 0.0;
  for (double x : grid)
    max_abs_x = std::max(max_abs_x, std::abs(x));
  const std::size_t n = oscillation_nodes(cutoff, max_abs_x, spec.nodes);
  const double step = cutoff / static_cast<double>(n);
  const auto w = simpson_weights(n, step);

  std::vector<Complex> pos(n + 1), neg(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = step * static_cast<double>(k);
    const Complex a = cf(t);
    const Complex b = cf(-t);
    check_finite(a, t);
    check_finite(b, -t);
    pos[k] = w[k] * a;
    neg[k] = w[k] * b;
  }

  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double theta = step * grid[i];
    out[i] = (phase_sum(pos, -theta) + phase_sum(neg, theta)) / (2.0 * pi);
  }
  return out;
}

std::vector<double>
invert_cf_on_grid(const ComplexFn& cf,
                  std::span<const double> grid,
                  double cutoff,
                  const QuadratureSpec& spec)
{
  const auto values = invert_cf_on_grid_complex(cf, grid, cutoff, spec);
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](Complex v) {
    return v.real();
  });
  return out;
}

double
trapezoid_mass(std::span<const double> grid, std::span<const double> values)
{
  if (grid.size() != values.size())
    throw Error(ErrorCode::LengthMismatch,
                "grid has " + std::to_string(grid.size()) + " points but " +
                  std::to_string(values.size()) + " values were given");
  require(grid.size() >= 2, "trapezoid rule needs at least two points");
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dx = grid[i] - grid[i - 1];
    require(dx > 0.0, "grid must be strictly increasing");
    sum += 0.5 * dx * (values[i] + values[i - 1]);
  }
  return sum;
}

std::vector<double>
uniform_grid(double lo, double hi, double step)
{
  require(step > 0.0 && hi > lo, "uniform grid needs lo < hi and step > 0");
  const auto count =
    static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + step * static_cast<double>(i);
  return grid;
}

void
accumulate_phasors(std::span<const double> xs,
                   double step,
                   std::span<Complex> acc)
{
  const std::size_t count = acc.size();
  auto* out = reinterpret_cast<double*>(acc.data());

  std::size_t j = 0;
  constexpr std::size_t lanes = 4;
  for (; j + lanes <= xs.size(); j += lanes) {
    double th[lanes], rr[lanes], ri[lanes];
    for (std::size_t l = 0; l < lanes; ++l) {
      th[l] = step * xs[j + l];
      rr[l] = std::cos(th[l]);
      ri[l] = std::sin(th[l]);
    }
    for (std::size_t k0 = 0; k0 < count; k0 += kReanchor) {
      double zr[lanes], zi[lanes];
      for (std::size_t l = 0; l < lanes; ++l) {
        const double a = static_cast<double>(k0) * th[l];
        zr[l] = std::cos(a);
        zi[l] = std::sin(a);
      }
      const std::size_t k1 = std::min(count, k0 + kReanchor);
      for (std::size_t k = k0; k < k1; ++k) {
        out[2 * k] += (zr[0] + zr[1]) + (zr[2] + zr[3]);
        out[2 * k + 1] += (zi[0] + zi[1]) + (zi[2] + zi[3]);
        for (std::size_t l = 0; l < lanes; ++l) {
          const double nr = zr[l] * rr[l] - zi[l] * ri[l];
          const double ni = zr[l] * ri[l] + zi[l] * rr[l];
          zr[l] = nr;
          zi[l] = ni;
        }
      }
    }
  }

  for (; j < xs.size(); ++j) {
    const double th = step * xs[j];
    const double rr = std::cos(th);
    const double ri = std::sin(th);
    for (std::size_t k0 = 0; k0 < count; k0 += kReanchor) {
      const double a = static_cast<double>(k0) * th;
      double zr = std::cos(a);
      double zi = std::sin(a);
      const std::size_t k1 = std::min(count, k0 + kReanchor);
      for (std::size_t k = k0; k < k1; ++k) {
        out[2 * k] += zr;
        out[2 * k + 1] += zi;
        const double nr = zr * rr - zi * ri;
        zi = zr * ri + zi * rr;
        zr = nr;
      }
    }
  }
}

Complex
phase_sum(std::span<const Complex> coeffs, double theta)
{
  const std::size_t count = coeffs.size();
  const auto* c = reinterpret_cast<const double*>(coeffs.data());
  const double rr = std::cos(theta);
  const double ri = std::sin(theta);
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t k0 = 0; k0 < count; k0 += kReanchor) {
    const double a = static_cast<double>(k0) * theta;
    double zr = std::cos(a);
    double zi = std::sin(a);
    const std::size_t k1 = std::min(count, k0 + kReanchor);
    for (std::size_t k = k0; k < k1; ++k) {
      const double cr = c[2 * k];
      const double ci = c[2 * k + 1];
      sr += cr * zr - ci * zi;
      si += cr * zi + ci * zr;
      const double nr = zr * rr - zi * ri;
      zi = zr * ri + zi * rr;
      zr = nr;
    }
  }
  return { sr, si };
}

} // namespace atomdeconv::numerics
