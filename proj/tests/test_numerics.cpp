#include "atomdeconv/error.hpp"
#include "atomdeconv/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace atomdeconv;
using numerics::Complex;
using numerics::QuadratureSpec;

TEST_CASE("simpson integrates cubics exactly")
{
  QuadratureSpec spec{ 16, 1e-7 };
  const auto v = numerics::integrate_symmetric(
    [](double t) { return Complex(t * t, 0.0); }, 1.0, spec);
  CHECK(v.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto c = numerics::integrate_symmetric(
    [](double t) { return Complex(3.0 * t * t * t - t * t + 2.0, 0.0); }, 2.0,
    spec);
  CHECK(c.real() == doctest::Approx(-16.0 / 3.0 + 8.0).epsilon(1e-14));
}

TEST_CASE("odd integrands vanish")
{
  QuadratureSpec spec{ 64, 1e-7 };
  const auto v = numerics::integrate_symmetric(
    [](double t) { return Complex(std::sin(3.0 * t) * std::exp(t * t), t); },
    1.3, spec);
  CHECK(std::abs(v) <= 1e-15);
}

TEST_CASE("u kernel integrates to two")
{
  QuadratureSpec spec{ 4096, 1e-7 };
  const auto v = numerics::integrate_symmetric(
    [](double t) {
      const double s = 1.0 - t * t;
      return Complex(693.0 / 8.0 * std::pow(t, 6) * s * s, 0.0);
    },
    1.0, spec);
  CHECK(std::abs(v.real() - 2.0) <= 1e-9);
}

TEST_CASE("simpson order on cos")
{
  const double exact = 2.0 * std::sin(1.0);
  double prev = INFINITY;
  for (std::size_t nodes = 16; nodes <= 256; nodes *= 2) {
    const auto v = numerics::integrate_symmetric(
      [](double t) { return Complex(std::cos(t), 0.0); }, 1.0,
      QuadratureSpec{ nodes, 1e-7 });
    const double err = std::abs(v.real() - exact);
    if (prev > 1e-14 && err > 1e-14)
      CHECK(prev / err >= 12.0);
    prev = err;
  }
}

TEST_CASE("quadrature spec validation")
{
  CHECK_THROWS_AS(QuadratureSpec({ 15, 1e-7 }).validate(), Error);
  CHECK_THROWS_AS(QuadratureSpec({ 8, 1e-7 }).validate(), Error);
  CHECK_THROWS_AS(QuadratureSpec({ 16, 0.0 }).validate(), Error);
  CHECK_NOTHROW(QuadratureSpec({ 16, 1e-7 }).validate());
  CHECK_THROWS_AS(numerics::integrate_symmetric(
                    [](double) { return Complex(1.0, 0.0); }, 0.0,
                    QuadratureSpec{}),
                  Error);
}

TEST_CASE("non-finite integrand")
{
  try {
    numerics::integrate_symmetric(
      [](double t) { return Complex(1.0 / (t - 0.5), 0.0); }, 1.0,
      QuadratureSpec{ 16, 1e-7 });
    FAIL("expected NonFiniteIntegrand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteIntegrand);
  }
}

TEST_CASE("inversion recovers closed-form densities")
{
  const std::vector<double> grid{ -2.0, -1.0, 0.0, 1.0, 2.0 };
  QuadratureSpec spec{ 4096, 1e-7 };
  const auto normal = numerics::invert_cf_on_grid(
    [](double t) { return Complex(std::exp(-0.5 * t * t), 0.0); }, grid, 40.0,
    spec);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact =
      std::exp(-0.5 * grid[i] * grid[i]) / std::sqrt(2.0 * numerics::pi);
    CHECK(std::abs(normal[i] - exact) <= 1e-7);
  }
  CHECK(std::abs(normal[2] - 0.3989423) <= 1e-7);
  CHECK(normal[0] == normal[4]);
  CHECK(normal[1] == normal[3]);

  const std::vector<double> zero{ 0.0 };
  const auto cauchy = numerics::invert_cf_on_grid(
    [](double t) { return Complex(std::exp(-std::abs(t)), 0.0); }, zero, 60.0,
    spec);
  CHECK(std::abs(cauchy[0] - 1.0 / numerics::pi) <= 1e-6);
}

TEST_CASE("inversion is linear")
{
  const auto grid = numerics::uniform_grid(-3.0, 3.0, 0.5);
  QuadratureSpec spec{ 2048, 1e-7 };
  auto c1 = [](double t) { return Complex(std::exp(-0.5 * t * t), 0.0); };
  auto c2 = [](double t) { return Complex(1.0 / (1.0 + t * t), 0.0); };
  const auto a = numerics::invert_cf_on_grid(c1, grid, 40.0, spec);
  const auto b = numerics::invert_cf_on_grid(c2, grid, 40.0, spec);
  const auto ab = numerics::invert_cf_on_grid(
    [&](double t) { return 2.0 * c1(t) - 0.5 * c2(t); }, grid, 40.0, spec);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(ab[i] - (2.0 * a[i] - 0.5 * b[i])) <= 1e-12);
}

TEST_CASE("inversion is translation covariant")
{
  const auto grid = numerics::uniform_grid(-4.0, 4.0, 0.25);
  QuadratureSpec spec{ 4096, 1e-7 };
  const double shift = 1.0;
  const auto base = numerics::invert_cf_on_grid(
    [](double t) { return Complex(std::exp(-0.5 * t * t), 0.0); }, grid, 40.0,
    spec);
  const auto moved = numerics::invert_cf_on_grid(
    [&](double t) { return std::exp(-0.5 * t * t) * std::polar(1.0, t * shift); },
    grid, 40.0, spec);
  // grid step 0.25: a shift of 1 is four grid points.
  for (std::size_t i = 4; i < grid.size(); ++i)
    CHECK(std::abs(moved[i] - base[i - 4]) <= 1e-10);
}

TEST_CASE("trapezoid mass")
{
  const std::vector<double> g{ 0.0, 1.0 };
  const std::vector<double> one{ 1.0, 1.0 };
  CHECK(numerics::trapezoid_mass(g, one) == 1.0);
  const std::vector<double> zeros{ 0.0, 0.0 };
  CHECK(numerics::trapezoid_mass(g, zeros) == 0.0);

  const auto grid = numerics::uniform_grid(-8.0, 8.0, 0.01);
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    phi[i] = std::exp(-0.5 * grid[i] * grid[i]) / std::sqrt(2.0 * numerics::pi);
  CHECK(std::abs(numerics::trapezoid_mass(grid, phi) - 1.0) <= 1e-6);

  const std::vector<double> three{ 1.0, 2.0, 3.0 };
  try {
    numerics::trapezoid_mass(g, three);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("uniform grid endpoints")
{
  const auto g = numerics::uniform_grid(-10.0, 10.0, 0.02);
  CHECK(g.size() == 1001);
  CHECK(g.front() == -10.0);
  CHECK(g.back() == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(g[500] == doctest::Approx(0.0));
}

TEST_CASE("phasor recurrence matches direct exponentials")
{
  const std::vector<double> xs{ 0.3, -2.7, 11.5, 4.0, -0.01, 7.25, 3.3 };
  const double step = 0.013;
  std::vector<Complex> acc(1000, Complex(0.0, 0.0));
  numerics::accumulate_phasors(xs, step, acc);
  double worst = 0.0;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    Complex direct = 0.0;
    for (double x : xs)
      direct += std::polar(1.0, static_cast<double>(k) * step * x);
    worst = std::max(worst, std::abs(direct - acc[k]));
  }
  CHECK(worst <= 1e-12);

  std::vector<Complex> coeffs(777);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    coeffs[k] = Complex(std::cos(0.1 * k), std::sin(0.05 * k)) / (1.0 + k);
  const double theta = -0.377;
  Complex direct = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    direct += coeffs[k] * std::polar(1.0, static_cast<double>(k) * theta);
  CHECK(std::abs(numerics::phase_sum(coeffs, theta) - direct) <= 1e-13);
}

TEST_CASE("oscillation node count")
{
  CHECK(numerics::oscillation_nodes(1.0, 0.0, 16) == 16);
  const auto n = numerics::oscillation_nodes(40.0, 10.0, 16);
  // 40 * 10 / (2 pi) periods, eight nodes each
  CHECK(n >= static_cast<std::size_t>(8.0 * 400.0 / (2.0 * numerics::pi)));
  CHECK(n % 2 == 0);
}
