#include "atomdeconv/kernels.hpp"

#include "atomdeconv/error.hpp"
#include "atomdeconv/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

namespace atomdeconv::kernels {

FourierKernel::FourierKernel(std::string name,
                             KernelKind kind,
                             std::function<double(double)> phi)
  : name_(std::move(name))
  , kind_(kind)
  , phi_(std::move(phi))
{
  require(static_cast<bool>(phi_), "kernel needs a Fourier transform");
}

double
phi_u_paper(double t)
{
  if (std::abs(t) > 1.0)
    return 0.0;
  const double t2 = t * t;
  const double one_minus = 1.0 - t2;
  return (693.0 / 8.0) * t2 * t2 * t2 * one_minus * one_minus;
}

double
phi_sinc(double t)
{
  return std::abs(t) <= 1.0 ? 1.0 : 0.0;
}

double
phi_w_default(double t, double alpha)
{
  require(alpha > 0.0, "poly-w kernel needs alpha > 0");
  if (std::abs(t) > 1.0)
    return 0.0;
  return 1.0 - std::pow(std::abs(t), alpha);
}

FourierKernel
paper_u_kernel()
{
  return { "paper-u", KernelKind::AtomKernelU, phi_u_paper };
}

FourierKernel
sinc_kernel(KernelKind kind)
{
  return { "sinc", kind, phi_sinc };
}

FourierKernel
poly_w_kernel(double alpha)
{
  require(alpha > 0.0, "poly-w kernel needs alpha > 0");
  return { "poly-w:" + show(alpha),
           KernelKind::DensityKernelW,
           [alpha](double t) { return phi_w_default(t, alpha); } };
}

FourierKernel
parse_kernel(std::string_view id, KernelKind role)
{
  if (id == "paper-u") {
    require(role == KernelKind::AtomKernelU,
            "paper-u is an atom-mass kernel and cannot be used for the density");
    return paper_u_kernel();
  }
  if (id == "sinc")
    return sinc_kernel(role);
  constexpr std::string_view poly = "poly-w:";
  if (id.substr(0, poly.size()) == poly) {
    require(role == KernelKind::DensityKernelW,
            "poly-w is a density kernel and cannot be used for the atom mass");
    const auto rest = id.substr(poly.size());
    double alpha = 0.0;
    const auto [ptr, ec] =
      std::from_chars(rest.data(), rest.data() + rest.size(), alpha);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
      throw Error(ErrorCode::ParseError,
                  "cannot parse kernel exponent in '" + std::string(id) + "'");
    return poly_w_kernel(alpha);
  }
  throw Error(ErrorCode::ParseError,
              "unknown kernel '" + std::string(id) +
                "' (expected paper-u, sinc or poly-w:<alpha>)");
}

namespace {

struct RatioScan
{
  double sup;
  bool unbounded;
};

// Scans |num(t)| / |t|^alpha over +-i/m, i = 1..m. Points where |num| is
// below `resolution` carry only rounding noise and are skipped. The value at
// the origin is extrapolated from the innermost resolved points t, 2t, 4t
// assuming an even expansion a + b t^2 + c t^4.
template<class Num>
RatioScan
scan_ratio(Num&& num, double alpha, std::size_t m, double resolution)
{
  const double step = 1.0 / static_cast<double>(m);
  auto ratio = [&](std::size_t i) {
    const double t = step * static_cast<double>(i);
    const double a = std::abs(num(t));
    const double b = std::abs(num(-t));
    const double p = std::pow(t, alpha);
    return std::max(a < resolution ? 0.0 : a / p, b < resolution ? 0.0 : b / p);
  };
  auto resolved = [&](std::size_t i) {
    const double t = step * static_cast<double>(i);
    return std::max(std::abs(num(t)), std::abs(num(-t))) >= resolution;
  };

  std::size_t first = 1;
  while (first <= m && !resolved(first))
    ++first;

  double sup = 0.0;
  if (4 * first <= m) {
    const double r1 = ratio(first);
    const double r2 = ratio(2 * first);
    const double r3 = ratio(4 * first);
    if (!std::isfinite(r1) || !std::isfinite(r2) || !std::isfinite(r3))
      return { INFINITY, true };
    // A bounded continuous ratio flattens out near zero; t^{-s} blow-up shows
    // as a log-slope s between the two innermost points.
    if (r1 > 0.0 && (r2 <= 0.0 || std::log2(r1 / r2) > 0.25))
      return { INFINITY, true };
    sup = std::max(0.0, (64.0 * r1 - 20.0 * r2 + r3) / 45.0);
  }
  for (std::size_t i = first; i <= m; ++i) {
    const double r = ratio(i);
    if (!std::isfinite(r))
      return { INFINITY, true };
    sup = std::max(sup, r);
  }
  return { sup, false };
}

double
simpson_on_support(const std::function<double(double)>& f, std::size_t m)
{
  numerics::QuadratureSpec spec;
  spec.nodes = 2 * m;
  return numerics::integrate_symmetric(
           [&](double t) { return numerics::Complex(f(t), 0.0); }, 1.0, spec)
    .real();
}

std::size_t
unit_panels(std::size_t grid_size)
{
  require(grid_size >= 5 && grid_size % 2 == 1,
          "validation grid size must be odd and >= 5");
  return grid_size - 1;
}

} // namespace

UValidity
validate_u_kernel(const FourierKernel& kernel,
                  double alpha,
                  std::size_t grid_size)
{
  require(kernel.kind() == KernelKind::AtomKernelU,
          "validate_u_kernel expects an atom-mass kernel");
  require(alpha > 0.0, "alpha must be positive");
  const std::size_t m = unit_panels(grid_size);

  // The normalization does not depend on the scan resolution.
  const double integral = simpson_on_support(
    [&](double t) { return kernel(t); },
    std::max(m, unit_panels(kDefaultValidationGrid)));
  if (!(std::abs(integral - 2.0) <= 1e-9))
    throw Error(ErrorCode::IntegralNotTwo,
                "kernel " + kernel.name() + " integrates to " +
                  show(integral) + " instead of 2");

  const auto scan =
    scan_ratio([&](double t) { return kernel(t); }, alpha, m, 0.0);
  if (scan.unbounded)
    throw Error(ErrorCode::RatioUnbounded,
                "phi(t)/t^alpha is unbounded near 0 for kernel " +
                  kernel.name());
  return { alpha, scan.sup, integral };
}

WValidity
validate_w_kernel(const FourierKernel& kernel,
                  double alpha,
                  std::size_t grid_size)
{
  require(kernel.kind() == KernelKind::DensityKernelW,
          "validate_w_kernel expects a density kernel");
  require(alpha > 0.0, "alpha must be positive");
  const std::size_t m = unit_panels(grid_size);

  const double at_zero = kernel(0.0);
  if (!(std::abs(at_zero - 1.0) <= 1e-12))
    throw Error(ErrorCode::NotOneAtZero,
                "kernel " + kernel.name() + " has phi(0) = " +
                  show(at_zero));

  const auto scan =
    scan_ratio([&](double t) { return kernel(t) - 1.0; }, alpha, m, 1e-7);
  if (scan.unbounded)
    throw Error(ErrorCode::RatioUnbounded,
                "(phi(t) - 1)/t^alpha is unbounded near 0 for kernel " +
                  kernel.name());

  const double square = simpson_on_support(
    [&](double t) {
      const double v = kernel(t);
      return v * v;
    },
    m);
  require(std::isfinite(square), "kernel square integral is not finite");
  return { alpha, scan.sup, at_zero, square };
}

} // namespace atomdeconv::kernels
