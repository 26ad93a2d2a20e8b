#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace atomdeconv::kernels {

//! Which estimator a kernel feeds: the atom mass (u) or the density (w).
enum class KernelKind
{
  AtomKernelU,
  DensityKernelW
};

//! A kernel described only through its real, even Fourier transform
//! supported on [-1, 1].
class FourierKernel
{
public:
  FourierKernel(std::string name,
                KernelKind kind,
                std::function<double(double)> phi);

  double operator()(double t) const
  {
    if (std::abs(t) > support_halfwidth_)
      return 0.0;
    return phi_(t);
  }

  const std::string& name() const { return name_; }
  KernelKind kind() const { return kind_; }
  double support_halfwidth() const { return support_halfwidth_; }

private:
  std::string name_;
  KernelKind kind_;
  std::function<double(double)> phi_;
  double support_halfwidth_{ 1.0 };
};

//! (693/8) t^6 (1 - t^2)^2 on [-1, 1].
double
phi_u_paper(double t);

//! Indicator of [-1, 1] (closed).
double
phi_sinc(double t);

//! (1 - |t|^alpha) on [-1, 1]; throws for alpha <= 0.
double
phi_w_default(double t, double alpha);

FourierKernel
paper_u_kernel();

FourierKernel
sinc_kernel(KernelKind kind);

FourierKernel
poly_w_kernel(double alpha);

//! Parses "paper-u", "sinc" or "poly-w:<alpha>". `role` fixes the kind of the
//! sinc kernel and is checked against the others.
FourierKernel
parse_kernel(std::string_view id, KernelKind role);

struct UValidity
{
  double alpha;
  double u_bound;
  double integral;
};

struct WValidity
{
  double alpha;
  double w_bound;
  double phi_at_zero;
  double square_integral;
};

inline constexpr std::size_t kDefaultValidationGrid = 4097;

//! Tightest U with |phi(t)/t^alpha| <= U on a uniform grid of `grid_size`
//! points per unit interval, plus the check int phi = 2 (tolerance 1e-9).
UValidity
validate_u_kernel(const FourierKernel& kernel,
                  double alpha,
                  std::size_t grid_size = kDefaultValidationGrid);

//! Tightest W with |phi(t) - 1| <= W |t|^alpha on the support, plus the
//! checks phi(0) = 1 and finite int phi^2. Points where |phi - 1| < 1e-7 are
//! dominated by cancellation and left out of the scan.
WValidity
validate_w_kernel(const FourierKernel& kernel,
                  double alpha,
                  std::size_t grid_size = kDefaultValidationGrid);

} // namespace atomdeconv::kernels
