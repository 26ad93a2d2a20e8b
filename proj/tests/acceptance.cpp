// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance [--criterion N]   (default: all)

#include "atomdeconv/cli.hpp"
#include "atomdeconv/error.hpp"
#include "atomdeconv/estimators.hpp"
#include "atomdeconv/kernels.hpp"
#include "atomdeconv/lowerbound.hpp"
#include "atomdeconv/noise.hpp"
#include "atomdeconv/numerics.hpp"
#include "atomdeconv/simulate.hpp"
#include "atomdeconv/tuning.hpp"

#include "support.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

using namespace atomdeconv;

namespace {

struct Verdict
{
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double
seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Monte-Carlo runs use 512 panels; the refinement gate still checks them.
constexpr std::size_t kMcNodes = 512;

simulate::ModelSpec
model(double p, noise::NoiseModel z)
{
  return { p, simulate::lookup_target("std-normal", 6.0), std::move(z) };
}

simulate::ExperimentConfig
config(tuning::Preset preset)
{
  simulate::ExperimentConfig cfg;
  cfg.preset = preset;
  cfg.quad_nodes = kMcNodes;
  return cfg;
}

std::string
rows_text(const simulate::RiskReport& r)
{
  std::string s;
  for (const auto& row : r.rows) {
    if (!row.ok())
      s += fmt::format(" [n={} failed: {}]", row.n, row.diagnostic);
    else
      s += fmt::format(" [n={} risk={:.4g} se={:.2g}]", row.n, row.risk_mean,
                       row.risk_se);
  }
  return s;
}

bool
all_ok(const simulate::RiskReport& r)
{
  for (const auto& row : r.rows)
    if (!row.ok())
      return false;
  return true;
}

const simulate::RiskReport&
criterion2_report()
{
  static std::optional<simulate::RiskReport> memo;
  if (!memo)
    memo = simulate::mc_risk_p(model(0.3, noise::laplace_noise(1.0)),
                               { 1u << 10, 1u << 12, 1u << 14, 1u << 16 }, 500,
                               config(tuning::Preset::Thm1Ordinary),
                               simulate::AtomVariant::clamped, 7);
  return *memo;
}

Verdict
criterion1()
{
  const auto start = Clock::now();
  const auto u = kernels::paper_u_kernel();
  const auto v = kernels::validate_u_kernel(u, 6.0);
  const double secs = seconds_since(start);
  const bool pass = std::abs(v.integral - 2.0) <= 1e-9 &&
                    std::abs(v.u_bound - 693.0 / 8.0) <= 1e-9 && secs < 1.0;
  return { pass, fmt::format("integral={:.17g} U={:.17g} time={:.3f}s", v.integral,
                             v.u_bound, secs) };
}

Verdict
criterion2()
{
  const auto start = Clock::now();
  const auto& r = criterion2_report();
  if (!all_ok(r))
    return { false, "aborted rows:" + rows_text(r) };
  const auto fit = simulate::fit_rate(r, tuning::RateScale::PolyInN);
  const double target = -13.0 / 16.0;
  return { std::abs(fit.slope - target) <= 0.15,
           fmt::format("slope={:.4f} target={:.4f}+-0.15 r2={:.4f} time={:.0f}s{}",
                       fit.slope, target, fit.r_squared, seconds_since(start),
                       rows_text(r)) };
}

Verdict
criterion3()
{
  const auto start = Clock::now();
  std::vector<std::uint64_t> ns;
  for (int k = 10; k <= 15; ++k)
    ns.push_back(std::uint64_t{ 1 } << k);
  const auto grid = numerics::uniform_grid(-10.0, 10.0, 0.02);
  const auto r =
    simulate::mc_risk_f(model(0.3, noise::laplace_noise(1.0)), ns, 200,
                        config(tuning::Preset::Thm2Ordinary), grid, 7);
  if (!all_ok(r))
    return { false, "aborted rows:" + rows_text(r) };
  const auto fit = simulate::fit_rate(r, tuning::RateScale::PolyInN);
  const double target = -12.0 / 17.0;
  return { std::abs(fit.slope - target) <= 0.15,
           fmt::format("slope={:.4f} target={:.4f}+-0.15 r2={:.4f} time={:.0f}s{}",
                       fit.slope, target, fit.r_squared, seconds_since(start),
                       rows_text(r)) };
}

Verdict
criterion4()
{
  const auto start = Clock::now();
  std::vector<std::uint64_t> ns;
  for (int k = 10; k <= 16; ++k)
    ns.push_back(std::uint64_t{ 1 } << k);
  const auto spec = model(0.3, noise::gaussian_noise(1.0));
  const auto rp = simulate::mc_risk_p(spec, ns, 200,
                                      config(tuning::Preset::Thm1Supersmooth),
                                      simulate::AtomVariant::clamped, 7);
  const auto grid = numerics::uniform_grid(-10.0, 10.0, 0.02);
  const auto rf = simulate::mc_risk_f(
    spec, ns, 200, config(tuning::Preset::Thm2Supersmooth), grid, 7);
  const bool ok_p = all_ok(rp) && simulate::non_increasing_within_2se(rp);
  const bool ok_f = all_ok(rf) && simulate::non_increasing_within_2se(rf);
  return { ok_p && ok_f,
           fmt::format("p:{} f:{} time={:.0f}s | p{} | f{}", ok_p ? "ok" : "FAIL",
                       ok_f ? "ok" : "FAIL", seconds_since(start), rows_text(rp),
                       rows_text(rf)) };
}

Verdict
criterion5()
{
  const auto r = simulate::mc_risk_p(model(1.0, noise::gaussian_noise(1.0)), { 10000 },
                                     200, config(tuning::Preset::Thm1Supersmooth),
                                     simulate::AtomVariant::raw, 7);
  if (!all_ok(r))
    return { false, "aborted rows:" + rows_text(r) };
  const auto& reps = r.atom_replicates.front();
  double mean = 0.0;
  for (const auto& a : reps)
    mean += a.p_raw;
  mean /= static_cast<double>(reps.size());
  double ss = 0.0;
  for (const auto& a : reps)
    ss += (a.p_raw - mean) * (a.p_raw - mean);
  const double se =
    std::sqrt(ss / static_cast<double>(reps.size() - 1) / static_cast<double>(reps.size()));
  const double z = (mean - 1.0) / se;
  return { std::abs(z) <= 4.0,
           fmt::format("mean={:.6f} se={:.2g} z={:.2f}", mean, se, z) };
}

Verdict
criterion6()
{
  const auto& r = criterion2_report();
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    for (const auto& a : r.atom_replicates[i]) {
      ++checked;
      if ((a.p_plus - 0.3) * (a.p_plus - 0.3) > (a.p_raw - 0.3) * (a.p_raw - 0.3))
        ++violations;
    }
  }
  return { violations == 0 && checked == 2000 && all_ok(r),
           fmt::format("replicates={} violations={}", checked, violations) };
}

Verdict
criterion7()
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto u = kernels::paper_u_kernel();
  const auto w = kernels::poly_w_kernel(6.0);
  const auto grid = numerics::uniform_grid(-5.0, 5.0, 0.25);
  constexpr std::size_t nodes = 512;
  // The library folds onto [0, 1/g] with up to 2 * nodes panels; the oracle
  // integrates [-1/g, 1/g] unfolded with 16 * nodes, four times as dense.
  constexpr std::size_t oracle_panels = 16 * nodes;
  double worst_p = 0.0;
  double worst_f = 0.0;
  for (int fixture = 0; fixture < 20; ++fixture) {
    const bool gauss = fixture % 2 == 0;
    const double scale = 0.5 + unit(rng);
    const auto z = gauss ? noise::gaussian_noise(scale) : noise::laplace_noise(scale);
    const double p = 0.8 * unit(rng);
    const std::size_t n = 20 + static_cast<std::size_t>(230 * unit(rng));
    const auto sample = simulate::sample_model(model(p, z), n, 1000 + fixture);
    const auto xs = sample.values();
    const double g = 0.6 + 0.6 * unit(rng);

    const double est_p = estimators::estimate_p_raw(sample, g, u, z, nodes);
    worst_p = std::max(
      worst_p, std::abs(est_p - test_support::oracle_p(xs, g, u, z, oracle_panels)));

    estimators::EstimationConfig cfg;
    cfg.g = g;
    cfg.h = 0.6 + 0.6 * unit(rng);
    cfg.epsilon = 0.05 + 0.2 * unit(rng);
    cfg.split = fixture % 4 == 1;
    cfg.quad_nodes = nodes;
    const auto est = estimators::estimate_f(sample, cfg, w, u, z, grid);
    const auto p_part = cfg.split ? sample.first_part() : xs;
    const auto ecf_part = cfg.split ? sample.second_part() : xs;
    const double p_hat = estimators::clamp_p(
      test_support::oracle_p(p_part, g, u, z, oracle_panels), cfg.epsilon);
    const auto ref = test_support::oracle_f(ecf_part, p_hat, cfg.h, w, z, grid,
                                            oracle_panels);
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst_f = std::max(worst_f, std::abs(est.values[i] - ref[i]));
  }
  return { worst_p <= 1e-6 && worst_f <= 1e-6,
           fmt::format("fixtures=20 max|dp|={:.2e} max|df|={:.2e}", worst_p, worst_f) };
}

Verdict
criterion8()
{
  const double pi = test_support::pi;
  const std::vector<double> xs{ 0.0, 1.0, 2.0 };
  const auto normal = numerics::invert_cf_on_grid(
    [](double t) { return std::complex<double>(std::exp(-0.5 * t * t), 0.0); }, xs,
    40.0, {});
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(normal[i] - std::exp(-0.5 * xs[i] * xs[i]) /
                                                   std::sqrt(2.0 * pi)));
  const std::vector<double> zero{ 0.0 };
  const auto cauchy = numerics::invert_cf_on_grid(
    [](double t) { return std::complex<double>(std::exp(-std::abs(t)), 0.0); }, zero,
    40.0, {});
  const double err_c = std::abs(cauchy[0] - 1.0 / pi);
  return { worst <= 1e-6 && err_c <= 1e-6,
           fmt::format("normal max err={:.2e} cauchy err={:.2e}", worst, err_c) };
}

Verdict
criterion9()
{
  const auto start = Clock::now();
  lowerbound::DivergenceStudy study;
  study.lambda = 1.0;
  study.alpha = 0.5;
  study.mode = lowerbound::DeltaMode::SupersmoothLog;
  study.c = 0.5;
  const auto rows = lowerbound::divergence_table(study, noise::gaussian_noise(1.0),
                                                 { 1000, 10000, 100000, 1000000 });
  bool decreasing = true;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += fmt::format(" [n={} delta={:.4f} n*chi2={:.4g}]", rows[i].n,
                          rows[i].delta, rows[i].n_times_chi_sq);
    if (i > 0 && !(rows[i].n_times_chi_sq < rows[i - 1].n_times_chi_sq))
      decreasing = false;
  }
  const double ratio = rows.back().n_times_chi_sq / rows.front().n_times_chi_sq;
  const lowerbound::AlternativePair pair(1.0, 0.05, 0.5);
  const double sep = lowerbound::separation(pair) / pair.shift() / std::exp(-1.0);
  const bool pass = decreasing && ratio < 0.1 && std::abs(sep - 1.0) <= 0.1 &&
                    seconds_since(start) < 300.0;
  return { pass, fmt::format("decreasing={} last/first={:.3g} "
                             "separation/(delta^(a+1/2) e^-lambda)={:.4f} time={:.1f}s{}",
                             decreasing, ratio, sep, seconds_since(start), detail) };
}

std::string
slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict
criterion10()
{
  const auto dir = std::filesystem::temp_directory_path() / "atomdeconv_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / fmt::format("rates_{}.csv", run);
    std::ostringstream err;
    const int code = cli::run(
      { "atomdeconv", "rates", "--preset", "thm1-ordinary", "--noise", "laplace:1",
        "--target", "std-normal", "--p", "0.3", "--ns", "1024,4096,16384,65536",
        "--replicates", "500", "--seed", "7", "--quad-nodes",
        std::to_string(kMcNodes), "--output", out.string() },
      err);
    if (code != 0)
      return { false, fmt::format("run {} exit {}: {}", run, code, err.str()) };
    outputs.push_back(slurp(out));
  }
  const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
  return { same, fmt::format("csv bytes={} identical={}", outputs[0].size(), same) };
}

Verdict
evaluate(int criterion)
{
  switch (criterion) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    case 9: return criterion9();
    case 10: return criterion10();
  }
  return { false, "unknown criterion" };
}

} // namespace

int
main(int argc, char** argv)
{
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc)
      which.push_back(std::atoi(argv[++i]));
  }
  if (which.empty())
    for (int c = 1; c <= 10; ++c)
      which.push_back(c);

  bool all_pass = true;
  for (int c : which) {
    Verdict v;
    try {
      v = evaluate(c);
    } catch (const Error& e) {
      v = { false, fmt::format("error {}: {}", to_string(e.code()), e.what()) };
    }
    all_pass = all_pass && v.pass;
    fmt::print("criterion {:>2}: {}  {}\n", c, v.pass ? "PASS" : "FAIL", v.detail);
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
