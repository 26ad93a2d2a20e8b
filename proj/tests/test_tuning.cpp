#include "atomdeconv/error.hpp"
#include "atomdeconv/tuning.hpp"

#include <doctest.h>

#include <cmath>

using namespace atomdeconv;
using namespace atomdeconv::tuning;

TEST_CASE("ordinary atom bandwidth")
{
  CHECK(g_ordinary(65536, 6.0, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g_ordinary(1, 6.0, 2.0, 1.0) == 1.0);
  CHECK(g_ordinary(65536, 6.0, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(g_ordinary(0, 6.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(g_ordinary(10, 0.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(g_ordinary(10, 6.0, -2.0, 1.0), Error);
  CHECK_THROWS_AS(g_ordinary(10, 6.0, 2.0, 0.0), Error);
  // n -> n 2^{2 alpha + 2 beta} halves g
  CHECK(g_ordinary(3 * 65536, 6.0, 2.0, 1.0) ==
        doctest::Approx(g_ordinary(3, 6.0, 2.0, 1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("supersmooth bandwidth")
{
  // log n = 8
  const auto n8 = static_cast<std::uint64_t>(std::llround(std::exp(8.0)));
  CHECK(g_supersmooth(n8, 2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-5));
  const auto n16 = static_cast<std::uint64_t>(std::llround(std::exp(16.0)));
  CHECK(std::abs(g_supersmooth(n16, 2.0, 2.0) - 0.35355) <= 1e-5);
  CHECK_THROWS_AS(g_supersmooth(1, 2.0, 2.0), Error);
  CHECK_THROWS_AS(g_supersmooth(10, 2.0, 0.0), Error);
  // phi_Z(1/g) = n^{-1/4} for standard Gaussian noise along the schedule
  for (std::uint64_t n : { 2ull, 1000ull, 1ull << 16, 1ull << 40 }) {
    const double t = 1.0 / g_supersmooth(n, 2.0, 2.0);
    CHECK(std::exp(-0.5 * t * t) ==
          doctest::Approx(std::pow(static_cast<double>(n), -0.25)).epsilon(1e-12));
  }
}

TEST_CASE("density bandwidth")
{
  CHECK(h_ordinary(200000, 6.0, 2.0, 1.0) ==
        doctest::Approx(std::pow(100000.0, -1.0 / 17.0)).epsilon(1e-15));
  CHECK(std::abs(h_ordinary(200000, 6.0, 2.0, 1.0) - 0.5080218046913021) <= 1e-12);
  CHECK(h_ordinary(2, 6.0, 2.0, 1.0) == 1.0);
  CHECK(h_ordinary(200001, 6.0, 2.0, 1.0) ==
        doctest::Approx(std::pow(100001.0, -1.0 / 17.0)).epsilon(1e-15));
  CHECK_THROWS_AS(h_ordinary(1, 6.0, 2.0, 1.0), Error);
}

TEST_CASE("truncation schedule")
{
  CHECK(std::abs(epsilon_schedule(100) - 0.17532225403814608) <= 1e-12);
  CHECK(std::abs(epsilon_schedule(1) - 0.910239) <= 1e-6);
  for (std::uint64_t n = 1; n < 2000; ++n) {
    CHECK(epsilon_schedule(n + 1) < epsilon_schedule(n));
    CHECK(epsilon_schedule(n) > 0.0);
    CHECK(epsilon_schedule(n) < 1.0);
  }
  CHECK_THROWS_AS(epsilon_schedule(0), Error);
}

TEST_CASE("schedules decrease strictly")
{
  for (std::uint64_t n = 2; n < 5000; n += 7) {
    CHECK(g_ordinary(n + 1, 6.0, 2.0, 1.0) < g_ordinary(n, 6.0, 2.0, 1.0));
    CHECK(g_supersmooth(n + 1, 2.0, 2.0) < g_supersmooth(n, 2.0, 2.0));
    CHECK(h_ordinary(n + 2, 6.0, 2.0, 1.0) < h_ordinary(n, 6.0, 2.0, 1.0));
    CHECK(g_supersmooth(n, 2.0, 2.0) > 0.0);
  }
}

TEST_CASE("theoretical rates")
{
  const noise::OrdinarySmooth os{ 0.5, 2.0 };
  const noise::Supersmooth ss{ 1.0, 0.0, 2.0, 2.0 };
  auto r = theoretical_rate({ 6.0, os, Quantity::AtomP });
  CHECK(r.scale == RateScale::PolyInN);
  CHECK(r.exponent == -13.0 / 16.0);
  r = theoretical_rate({ 6.0, os, Quantity::DensityF });
  CHECK(r.scale == RateScale::PolyInN);
  CHECK(r.exponent == doctest::Approx(-12.0 / 17.0).epsilon(1e-15));
  r = theoretical_rate({ 6.0, ss, Quantity::DensityF });
  CHECK(r.scale == RateScale::LogInN);
  CHECK(r.exponent == -6.0);
  r = theoretical_rate({ 6.0, ss, Quantity::AtomP });
  CHECK(r.exponent == -6.5);
  CHECK_THROWS_AS(theoretical_rate({ 0.0, ss, Quantity::AtomP }), Error);
}

TEST_CASE("presets")
{
  const noise::SmoothnessClass os = noise::OrdinarySmooth{ 0.5, 2.0 };
  const noise::SmoothnessClass ss = noise::Supersmooth{ 1.0, 0.0, 2.0, 2.0 };
  for (auto p : { Preset::Thm1Ordinary, Preset::Thm1Supersmooth,
                  Preset::Thm2Ordinary, Preset::Thm2Supersmooth })
    CHECK(parse_preset(to_string(p)) == p);
  CHECK_THROWS_AS(parse_preset("thm3"), Error);

  CHECK(auto_preset(os, Quantity::AtomP) == Preset::Thm1Ordinary);
  CHECK(auto_preset(ss, Quantity::DensityF) == Preset::Thm2Supersmooth);

  const auto a = schedule_for(Preset::Thm1Ordinary, 65536, 6.0, os);
  CHECK(a.g == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(!a.split);
  const auto b = schedule_for(Preset::Thm2Ordinary, 200001, 6.0, os);
  CHECK(b.split);
  CHECK(b.g == g_ordinary(100000, 6.0, 2.0, 1.0));
  CHECK(b.h == h_ordinary(200001, 6.0, 2.0, 1.0));
  CHECK(b.epsilon == epsilon_schedule(200001));
  const auto c = schedule_for(Preset::Thm2Supersmooth, 1000, 6.0, ss);
  CHECK(c.g == c.h);
  CHECK(!c.split);
  CHECK_THROWS_AS(schedule_for(Preset::Thm1Ordinary, 100, 6.0, ss), Error);
  CHECK_THROWS_AS(schedule_for(Preset::Thm2Supersmooth, 100, 6.0, os), Error);
}
