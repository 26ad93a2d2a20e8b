#include "atomdeconv/lowerbound.hpp"

#include "atomdeconv/error.hpp"

#include <algorithm>
#include <string>

namespace atomdeconv::lowerbound {

using numerics::pi;

AlternativePair::AlternativePair(double lambda, double delta, double alpha)
  : lambda_(lambda)
  , delta_(delta)
  , alpha_(alpha)
{
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
  require(delta >= 0.0 && delta < 1.0, "delta must lie in [0, 1)");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  shift_ = delta > 0.0 ? std::pow(delta, alpha + 0.5) : 0.0;
}

double
FlatTop::transition(double s)
{
  if (s <= 0.0)
    return 1.0;
  if (s >= 1.0)
    return 0.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return b / (a + b);
}

double
FlatTop::operator()(double t) const
{
  return transition(std::abs(t) - 1.0);
}

FlatTop
flat_top_H()
{
  return {};
}

double
phi_g1(double t)
{
  return std::exp(-std::abs(t));
}

double
poisson_sum_cf(double phi_g, double lambda)
{
  return std::expm1(lambda * phi_g) / std::expm1(lambda);
}

double
phi_f1(double t, const AlternativePair& pair)
{
  return poisson_sum_cf(phi_g1(t), pair.lambda1());
}

double
tau(double t, const AlternativePair& pair, const FlatTop& H)
{
  if (pair.shift() == 0.0)
    return 0.0;
  return pair.shift() / pair.lambda2() * (phi_g1(t) - 1.0) *
         H(pair.delta() * t);
}

double
phi_g2(double t, const AlternativePair& pair, const FlatTop& H)
{
  return phi_g1(t) + tau(t, pair, H);
}

double
phi_f2(double t, const AlternativePair& pair, const FlatTop& H)
{
  return poisson_sum_cf(phi_g2(t, pair, H), pair.lambda2());
}

Complex
phi_q(double t,
      Alternative which,
      const AlternativePair& pair,
      const FlatTop& H,
      const NoiseCf& noise_cf)
{
  // p + (1 - p) phi_f collapses to exp(lambda (phi_g - 1)) when p = e^{-lambda}.
  const double mix = which == Alternative::Q1
                       ? std::exp(pair.lambda1() * (phi_g1(t) - 1.0))
                       : std::exp(pair.lambda2() * (phi_g2(t, pair, H) - 1.0));
  return mix * noise_cf(t);
}

Complex
phi_q_difference(double t,
                 const AlternativePair& pair,
                 const FlatTop& H,
                 const NoiseCf& noise_cf)
{
  const double g = phi_g1(t);
  const double gap = pair.shift() * (g - 1.0) * (H(pair.delta() * t) - 1.0);
  if (gap == 0.0)
    return 0.0;
  return std::exp(pair.lambda1() * (g - 1.0)) * std::expm1(gap) * noise_cf(t);
}

namespace {

// Frequency cutoff beyond which the inverted CFs are negligible.
double
frequency_cutoff(const AlternativePair& pair, const noise::NoiseModel& noise)
{
  if (const auto* ss = std::get_if<noise::Supersmooth>(&noise.classification())) {
    const double tol = 1e-15;
    return std::max(40.0, std::pow(ss->gamma * std::log(10.0 / tol),
                                   1.0 / ss->beta));
  }
  // Ordinary smooth: the atom part is split off analytically and the rest
  // decays like e^{-|t|} beyond the support 2/delta of the perturbation.
  return pair.delta() > 0.0 ? 2.0 / pair.delta() + 40.0 : 40.0;
}

// Inverts noise_cf(t) * c(t) on the grid. For ordinary smooth noise c tends
// to c_inf, so c_inf * k(x) is added in closed form and only the decaying
// remainder is integrated numerically.
std::vector<double>
invert_mixture(const std::function<Complex(double)>& c,
               double c_inf,
               const noise::NoiseModel& noise,
               std::span<const double> grid,
               double cutoff,
               std::size_t nodes)
{
  numerics::QuadratureSpec spec;
  spec.nodes = nodes;
  const bool split = noise::is_ordinary(noise.classification());
  auto integrand = [&](double t) -> Complex {
    const Complex z = noise.cf(t);
    return split ? (c(t) - c_inf) * z : c(t) * z;
  };
  auto values = numerics::invert_cf_on_grid(integrand, grid, cutoff, spec);
  if (split) {
    require(noise.has_density(),
            "ordinary smooth noise needs a density for the lower-bound lab");
    for (std::size_t i = 0; i < grid.size(); ++i)
      values[i] += c_inf * noise.density(grid[i]);
  }
  return values;
}

double
central_mass(const noise::NoiseModel& noise, double a)
{
  require(noise.has_density(),
          "lower-bound tail bound needs the noise density");
  constexpr std::size_t panels = 2000;
  const double step = 2.0 * a / panels;
  const auto w = numerics::simpson_weights(panels, step);
  double sum = 0.0;
  for (std::size_t k = 0; k <= panels; ++k)
    sum += w[k] * noise.density(-a + step * static_cast<double>(k));
  return sum;
}

// (1/2pi) int |d^2/dt^2 (q2 - q1)^(t)| dt by central differences.
double
second_derivative_mass(const AlternativePair& pair,
                       const FlatTop& H,
                       const noise::NoiseModel& noise,
                       double t_max)
{
  const auto cf = [&](double t) { return noise.cf(t); };
  constexpr std::size_t steps = 200000;
  const double h = t_max / steps;
  double sum = 0.0;
  Complex prev = phi_q_difference(-h, pair, H, cf);
  Complex cur = phi_q_difference(0.0, pair, H, cf);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = h * static_cast<double>(k);
    const Complex next = phi_q_difference(t + h, pair, H, cf);
    const double d2 = std::abs(next - 2.0 * cur + prev) / (h * h);
    sum += (k == 0 || k == steps) ? 0.5 * d2 : d2;
    prev = cur;
    cur = next;
  }
  // Symmetric in t: double the half-line integral.
  return 2.0 * sum * h / (2.0 * pi);
}

} // namespace

ChiSquare
chi_sq_divergence(const AlternativePair& pair,
                  const FlatTop& H,
                  const noise::NoiseModel& noise,
                  double cutoff,
                  double grid_step,
                  std::size_t quad_nodes)
{
  require(cutoff > 0.0 && grid_step > 0.0,
          "cutoff and grid_step must be positive");
  const auto grid = numerics::uniform_grid(-cutoff, cutoff, grid_step);
  const double t_cut = frequency_cutoff(pair, noise);

  const auto q1 = invert_mixture(
    [&](double t) { return Complex(std::exp(pair.lambda1() * (phi_g1(t) - 1.0))); },
    pair.p1(), noise, grid, t_cut, quad_nodes);

  std::vector<double> diff(grid.size(), 0.0);
  if (pair.shift() > 0.0) {
    const auto one = [](double) { return Complex(1.0, 0.0); };
    diff = invert_mixture(
      [&](double t) { return phi_q_difference(t, pair, H, one); },
      pair.p2() - pair.p1(), noise, grid, t_cut, quad_nodes);
  }

  ChiSquare out{ 0.0, 0.0, INFINITY };
  std::vector<double> ratio(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(q1[i] > 0.0))
      throw Error(ErrorCode::DensityNonPositive,
                  "inverted q1 is " + show(q1[i]) + " at x = " +
                    show(grid[i]) + "; refine the quadrature");
    out.min_q1 = std::min(out.min_q1, q1[i]);
    ratio[i] = diff[i] * diff[i] / q1[i];
  }
  out.chi_sq = numerics::trapezoid_mass(grid, ratio);

  if (pair.shift() > 0.0) {
    const double a = kTailShiftA;
    const double lam1 = pair.lambda1();
    const double c = lam1 * std::exp(-lam1) * central_mass(noise, a) / pi;
    const double t_max = noise::is_ordinary(noise.classification())
                           ? 10.0 * t_cut
                           : t_cut;
    const double m = second_derivative_mass(pair, H, noise, t_max);
    const double l = cutoff;
    const double shape = (1.0 + a * a) / (3.0 * l * l * l) + a / (l * l) + 1.0 / l;
    out.tail_bound = 2.0 * m * m / c * shape;
  }
  return out;
}

double
separation(const AlternativePair& pair)
{
  return std::exp(-pair.lambda()) * -std::expm1(-pair.shift());
}

double
delta_schedule(std::uint64_t n,
               DeltaMode mode,
               double c,
               double alpha,
               double beta)
{
  require(n >= 2, "delta schedule needs n >= 2");
  require(alpha > 0.0, "alpha must be positive");
  if (mode == DeltaMode::SupersmoothLog) {
    require(c > 0.0 && c < 1.0, "log schedule needs 0 < c < 1");
    return c / std::sqrt(std::log(static_cast<double>(n)));
  }
  require(c > 0.0, "polynomial schedule needs c > 0");
  require(beta > 0.5, "polynomial schedule needs beta > 1/2");
  return c * std::pow(static_cast<double>(n), -1.0 / (2.0 * alpha + 2.0 * beta));
}

std::vector<double>
inverted_g2(const AlternativePair& pair,
            const FlatTop& H,
            std::span<const double> grid,
            std::size_t quad_nodes)
{
  numerics::QuadratureSpec spec;
  spec.nodes = quad_nodes;
  const double cutoff = pair.delta() > 0.0 ? 2.0 / pair.delta() + 40.0 : 40.0;
  return numerics::invert_cf_on_grid(
    [&](double t) { return Complex(phi_g2(t, pair, H), 0.0); }, grid, cutoff,
    spec);
}

std::vector<DivergenceRow>
divergence_table(const DivergenceStudy& study,
                 const noise::NoiseModel& noise,
                 const std::vector<std::uint64_t>& ns)
{
  require(!ns.empty(), "at least one n is needed");
  const auto H = flat_top_H();
  std::vector<DivergenceRow> rows;
  for (auto n : ns) {
    const double delta =
      delta_schedule(n, study.mode, study.c, study.alpha, study.beta);
    const AlternativePair pair(study.lambda, delta, study.alpha);
    const auto chi = chi_sq_divergence(pair, H, noise, study.cutoff,
                                       study.grid_step, study.quad_nodes);
    rows.push_back({ delta, n, chi.chi_sq,
                     static_cast<double>(n) * chi.chi_sq, separation(pair),
                     chi.tail_bound });
  }
  return rows;
}

} // namespace atomdeconv::lowerbound
