#include "atomdeconv/simulate.hpp"

#include "atomdeconv/error.hpp"
#include "atomdeconv/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace atomdeconv::simulate {

using numerics::pi;

double
sobolev_integral(const std::function<Complex(double)>& cf,
                 double alpha,
                 double cutoff,
                 std::size_t nodes)
{
  require(alpha > 0.0, "alpha must be positive");
  require(cutoff > 0.0, "cutoff must be positive");
  require(nodes >= 2 && nodes % 2 == 0, "nodes must be even");
  const double step = cutoff / static_cast<double>(nodes);
  const auto w = numerics::simpson_weights(nodes, step);
  double sum = 0.0;
  for (std::size_t k = 0; k <= nodes; ++k) {
    const double t = step * static_cast<double>(k);
    const double weight = 1.0 + std::pow(t, 2.0 * alpha);
    sum += w[k] * weight * (std::norm(cf(t)) + std::norm(cf(-t)));
  }
  return sum;
}

namespace {

TargetDensity
std_normal_target(double alpha)
{
  TargetDensity t;
  t.name = "std-normal";
  t.density = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
  };
  t.cf = [](double s) { return Complex(std::exp(-0.5 * s * s), 0.0); };
  t.sampler = [](Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
  };
  t.sobolev_alpha = alpha;
  t.k_sigma = sobolev_integral(t.cf, alpha, 40.0);
  return t;
}

TargetDensity
cauchy_target(double alpha)
{
  TargetDensity t;
  t.name = "cauchy";
  t.density = [](double x) { return 1.0 / (pi * (1.0 + x * x)); };
  t.cf = [](double s) { return Complex(std::exp(-std::abs(s)), 0.0); };
  t.sampler = [](Rng& rng) {
    return std::cauchy_distribution<double>(0.0, 1.0)(rng);
  };
  t.sobolev_alpha = alpha;
  // e^{-2t} t^{2 alpha} peaks at t = alpha.
  t.k_sigma = sobolev_integral(t.cf, alpha, 60.0 + 4.0 * alpha);
  return t;
}

} // namespace

std::vector<TargetDensity>
builtin_targets(double alpha)
{
  require(alpha > 0.0, "alpha must be positive");
  return { std_normal_target(alpha), cauchy_target(alpha) };
}

TargetDensity
lookup_target(std::string_view name, double alpha)
{
  for (auto& t : builtin_targets(alpha))
    if (t.name == name)
      return t;
  throw Error(ErrorCode::ParseError,
              "unknown target '" + std::string(name) +
                "' (expected std-normal or cauchy)");
}

void
ModelSpec::validate() const
{
  require(p >= 0.0 && p <= 1.0, "atom mass p must lie in [0, 1]");
  require(static_cast<bool>(target.sampler), "target needs a sampler");
}

LatentDraws
sample_model_latent(const ModelSpec& spec, std::size_t n, std::uint64_t seed)
{
  spec.validate();
  require(n >= 1, "sample size must be at least 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> xs(n);
  std::vector<std::uint8_t> atom(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool on_atom = unif(rng) < spec.p;
    const double y = on_atom ? 0.0 : spec.target.sampler(rng);
    xs[i] = y + spec.noise.draw(rng);
    atom[i] = on_atom ? 1 : 0;
  }
  return { estimators::Sample(std::move(xs)), std::move(atom) };
}

estimators::Sample
sample_model(const ModelSpec& spec, std::size_t n, std::uint64_t seed)
{
  return sample_model_latent(spec, n, seed).sample;
}

namespace {

std::uint64_t
splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
// writes only its own slot, so results do not depend on scheduling.
template<class Body>
void
parallel_for(std::size_t count, unsigned threads, Body&& body)
{
  const unsigned workers =
    std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++)
        body(i);
    });
  for (auto& t : pool)
    t.join();
}

struct ReplicateOutcome
{
  double loss = 0.0;
  AtomReplicate atom{ 0.0, 0.0, 0.0 };
  std::string error;
  ErrorCode code = ErrorCode::InvalidArgument;
};

RiskRow
summarize(std::uint64_t n, const std::vector<ReplicateOutcome>& outcomes)
{
  RiskRow row;
  row.n = n;
  row.replicates = outcomes.size();
  for (std::size_t r = 0; r < outcomes.size(); ++r)
    if (!outcomes[r].error.empty()) {
      row.diagnostic = "replicate " + std::to_string(r) + ": " +
                       outcomes[r].error;
      row.failure = outcomes[r].code;
      row.risk_mean = NAN;
      row.risk_se = NAN;
      return row;
    }
  double sum = 0.0;
  for (const auto& o : outcomes)
    sum += o.loss;
  const double m = static_cast<double>(outcomes.size());
  const double mean = sum / m;
  double ss = 0.0;
  for (const auto& o : outcomes)
    ss += (o.loss - mean) * (o.loss - mean);
  const double var = outcomes.size() > 1 ? ss / (m - 1.0) : 0.0;
  row.risk_mean = mean;
  row.risk_se = std::sqrt(var / m);
  return row;
}

void
check_experiment(const std::vector<std::uint64_t>& ns,
                 std::size_t replicates,
                 const ExperimentConfig& config)
{
  require(!ns.empty(), "at least one sample size is needed");
  require(replicates >= 2, "at least two replicates are needed");
  require(config.alpha > 0.0 && config.d > 0.0, "alpha and d must be positive");
  for (auto n : ns)
    require(n >= 2, "sample sizes must be at least 2");
}

std::string
describe(const Error& e)
{
  return std::string(to_string(e.code())) + ": " + e.what();
}

} // namespace

std::uint64_t
replicate_seed(std::uint64_t master, std::uint64_t n, std::uint64_t rep)
{
  return splitmix64(splitmix64(splitmix64(master) ^ n) ^ rep);
}

AtomVariant
parse_variant(std::string_view name)
{
  if (name == "raw")
    return AtomVariant::raw;
  if (name == "clamped")
    return AtomVariant::clamped;
  if (name == "positive")
    return AtomVariant::positive;
  throw Error(ErrorCode::ParseError,
              "unknown estimator variant '" + std::string(name) + "'");
}

std::string_view
to_string(AtomVariant variant)
{
  switch (variant) {
    case AtomVariant::raw:
      return "raw";
    case AtomVariant::clamped:
      return "clamped";
    case AtomVariant::positive:
      return "positive";
  }
  return "unknown";
}

RiskReport
mc_risk_p(const ModelSpec& spec,
          const std::vector<std::uint64_t>& ns,
          std::size_t replicates,
          const ExperimentConfig& config,
          AtomVariant variant,
          std::uint64_t seed)
{
  spec.validate();
  check_experiment(ns, replicates, config);
  require(tuning::quantity_of(config.preset) == tuning::Quantity::AtomP,
          "mc_risk_p needs a thm1 preset");

  RiskReport report;
  report.quantity = tuning::Quantity::AtomP;
  report.seed = seed;
  auto sorted = ns;
  std::sort(sorted.begin(), sorted.end());

  for (auto n : sorted) {
    const auto sched = tuning::schedule_for(
      config.preset, n, config.alpha, spec.noise.classification(), config.d);
    std::vector<ReplicateOutcome> outcomes(replicates);
    parallel_for(replicates, config.threads, [&](std::size_t r) {
      try {
        const auto sample = sample_model(spec, n, replicate_seed(seed, n, r));
        const double raw = estimators::estimate_p_raw(
          sample, sched.g, config.u, spec.noise, config.quad_nodes);
        auto& a = outcomes[r].atom;
        a = { raw,
              estimators::clamp_p(raw, sched.epsilon),
              estimators::positive_part_p(raw) };
        const double est = variant == AtomVariant::raw       ? a.p_raw
                           : variant == AtomVariant::clamped ? a.p_clamped
                                                             : a.p_plus;
        outcomes[r].loss = (est - spec.p) * (est - spec.p);
      } catch (const Error& e) {
        outcomes[r].error = describe(e);
        outcomes[r].code = e.code();
      }
    });
    report.rows.push_back(summarize(n, outcomes));
    std::vector<AtomReplicate> atoms(replicates);
    std::transform(outcomes.begin(), outcomes.end(), atoms.begin(),
                   [](const ReplicateOutcome& o) { return o.atom; });
    report.atom_replicates.push_back(std::move(atoms));
  }
  return report;
}

RiskReport
mc_risk_f(const ModelSpec& spec,
          const std::vector<std::uint64_t>& ns,
          std::size_t replicates,
          const ExperimentConfig& config,
          const std::vector<double>& grid,
          std::uint64_t seed)
{
  spec.validate();
  check_experiment(ns, replicates, config);
  require(tuning::quantity_of(config.preset) == tuning::Quantity::DensityF,
          "mc_risk_f needs a thm2 preset");
  require(grid.size() >= 2, "MISE grid needs at least two points");

  std::vector<double> truth(grid.size());
  std::transform(grid.begin(), grid.end(), truth.begin(), spec.target.density);
  const double mass = numerics::trapezoid_mass(grid, truth);
  if (mass < 0.999)
    throw Error(ErrorCode::GridTooNarrow,
                "target " + spec.target.name + " has only mass " +
                  show(mass) + " on the MISE grid");

  RiskReport report;
  report.quantity = tuning::Quantity::DensityF;
  report.seed = seed;
  auto sorted = ns;
  std::sort(sorted.begin(), sorted.end());

  for (auto n : sorted) {
    const auto sched = tuning::schedule_for(
      config.preset, n, config.alpha, spec.noise.classification(), config.d);
    estimators::EstimationConfig est_cfg;
    est_cfg.g = sched.g;
    est_cfg.h = sched.h;
    est_cfg.epsilon = sched.epsilon;
    est_cfg.split = sched.split;
    est_cfg.quad_nodes = config.quad_nodes;

    std::vector<ReplicateOutcome> outcomes(replicates);
    parallel_for(replicates, config.threads, [&](std::size_t r) {
      try {
        const auto sample = sample_model(spec, n, replicate_seed(seed, n, r));
        const auto est = estimators::estimate_f(sample, est_cfg, config.w,
                                                config.u, spec.noise, grid);
        std::vector<double> sq(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double e = est.values[i] - truth[i];
          sq[i] = e * e;
        }
        outcomes[r].loss = numerics::trapezoid_mass(grid, sq);
      } catch (const Error& e) {
        outcomes[r].error = describe(e);
        outcomes[r].code = e.code();
      }
    });
    report.rows.push_back(summarize(n, outcomes));
  }
  return report;
}

RateFit
fit_rate(const RiskReport& report, tuning::RateScale scale)
{
  require(report.rows.size() >= 3, "rate fit needs at least three rows");
  std::vector<double> xs, ys;
  for (const auto& row : report.rows) {
    if (!(row.risk_mean > 0.0))
      throw Error(ErrorCode::NonPositiveRisk,
                  "risk at n = " + std::to_string(row.n) +
                    " is not positive; cannot take logs");
    const double ln = std::log(static_cast<double>(row.n));
    if (scale == tuning::RateScale::LogInN)
      require(ln > 0.0, "log-scale fit needs n >= 2");
    xs.push_back(scale == tuning::RateScale::PolyInN ? ln : std::log(ln));
    ys.push_back(std::log(row.risk_mean));
  }
  const double m = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  require(sxx > 0.0, "rate fit needs distinct sample sizes");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return { slope, intercept, r2 };
}

bool
non_increasing_within_2se(const RiskReport& report)
{
  for (const auto& row : report.rows)
    if (!row.ok())
      return false;
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    const auto& a = report.rows[k - 1];
    const auto& b = report.rows[k];
    const double band =
      2.0 * std::sqrt(a.risk_se * a.risk_se + b.risk_se * b.risk_se);
    if (b.risk_mean > a.risk_mean + band)
      return false;
  }
  return true;
}

} // namespace atomdeconv::simulate
