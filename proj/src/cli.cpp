#include "atomdeconv/cli.hpp"

#include "atomdeconv/error.hpp"
#include "atomdeconv/estimators.hpp"
#include "atomdeconv/io.hpp"
#include "atomdeconv/kernels.hpp"
#include "atomdeconv/lowerbound.hpp"
#include "atomdeconv/noise.hpp"
#include "atomdeconv/simulate.hpp"
#include "atomdeconv/tuning.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

namespace atomdeconv::cli {

namespace {

using io::format_double;

// -- config file -------------------------------------------------------------

std::string_view
trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// "key = value" lines; '#' and ';' start comments. Keys may carry a leading
// "--". Values may be quoted.
std::vector<std::pair<std::string, std::string>>
read_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#' || body.front() == ';')
      continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ParseError,
                  fmt::format("{}:{}: expected 'key = value'", path, line_no));
    auto key = trim(body.substr(0, eq));
    auto value = trim(body.substr(eq + 1));
    while (!key.empty() && key.front() == '-')
      key.remove_prefix(1);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw Error(ErrorCode::ParseError,
                  fmt::format("{}:{}: empty key", path, line_no));
    entries.emplace_back(std::string(key), std::string(value));
  }
  return entries;
}

std::string
flag_name(std::string_view token)
{
  if (token.size() < 3 || token.substr(0, 2) != "--")
    return {};
  token.remove_prefix(2);
  return std::string(token.substr(0, token.find('=')));
}

// Splices the entries of `--config <path>` into the argument list in front of
// the command-line flags, skipping keys that the command line sets itself.
std::vector<std::string>
expand_config(const std::vector<std::string>& args)
{
  std::optional<std::string> path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size())
        throw Error(ErrorCode::ParseError, "--config needs a path");
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      kept.push_back(a);
    }
  }
  if (!path)
    return kept;

  std::set<std::string> given;
  for (std::size_t i = 1; i < kept.size(); ++i)
    if (auto name = flag_name(kept[i]); !name.empty())
      given.insert(name);

  // Insert right after the subcommand name.
  std::size_t at = 1;
  while (at < kept.size() && kept[at].rfind("-", 0) == 0)
    ++at;
  at = std::min(at + 1, kept.size());

  std::vector<std::string> from_file;
  for (const auto& [key, value] : read_config(*path))
    if (!given.count(key))
      from_file.push_back("--" + key + "=" + value);
  kept.insert(kept.begin() + static_cast<std::ptrdiff_t>(at),
              from_file.begin(), from_file.end());
  return kept;
}

// -- shared option groups ----------------------------------------------------

struct GridOptions
{
  double lo = -10.0;
  double hi = 10.0;
  double step = 0.02;

  void attach(CLI::App* app)
  {
    app->add_option("--grid-lo", lo, "Left end of the evaluation grid")
      ->capture_default_str();
    app->add_option("--grid-hi", hi, "Right end of the evaluation grid")
      ->capture_default_str();
    app->add_option("--grid-step", step, "Grid spacing")->capture_default_str();
  }

  std::vector<double> build() const
  {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
            "grid needs finite grid-lo < grid-hi");
    require(step > 0.0 && std::isfinite(step), "grid-step must be positive");
    require((hi - lo) / step <= 1e7, "grid has more than 1e7 points");
    return numerics::uniform_grid(lo, hi, step);
  }
};

// Either "auto" or a positive number.
std::optional<double>
parse_bandwidth(const std::string& text)
{
  if (text == "auto")
    return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::ParseError,
                "--bandwidth must be 'auto' or a number, got '" + text + "'");
  require(v > 0.0 && std::isfinite(v), "--bandwidth must be positive");
  return v;
}

void
check_positive(double v, const char* name)
{
  require(v > 0.0 && std::isfinite(v), std::string(name) + " must be positive");
}

std::string
csv(const std::vector<std::string>& header,
    const std::vector<std::vector<std::string>>& rows)
{
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

// -- estimate-p --------------------------------------------------------------

struct EstimatePOptions
{
  std::string input;
  std::string noise;
  std::string kernel = "paper-u";
  double alpha = 6.0;
  std::string bandwidth = "auto";
  std::optional<double> g;
  std::optional<double> epsilon;
  double d = 1.0;
  std::size_t quad_nodes = 4096;
  double tolerance = 1e-7;
  std::string output = "-";
};

void
attach(CLI::App* app, EstimatePOptions& o)
{
  app->add_option("--input", o.input, "Sample file, one value per line")
    ->required();
  app->add_option("--noise", o.noise, "gaussian:<sigma> or laplace:<b>")
    ->required();
  app->add_option("--kernel", o.kernel, "Atom kernel id")->capture_default_str();
  app->add_option("--alpha", o.alpha, "Smoothness index")->capture_default_str();
  app->add_option("--bandwidth", o.bandwidth, "'auto' or a value of g")
    ->capture_default_str();
  app->add_option("--g", o.g, "Explicit bandwidth g (overrides --bandwidth)");
  app->add_option("--epsilon", o.epsilon, "Truncation level");
  app->add_option("--d", o.d, "Bandwidth constant")->capture_default_str();
  app->add_option("--quad-nodes", o.quad_nodes, "Simpson panels")
    ->capture_default_str();
  app->add_option("--tolerance", o.tolerance, "Refinement tolerance")
    ->capture_default_str();
  app->add_option("--output", o.output, "JSON output path ('-' for stdout)")
    ->capture_default_str();
}

int
run_estimate_p(const EstimatePOptions& o)
{
  const auto model = noise::parse_noise(o.noise);
  const auto u = kernels::parse_kernel(o.kernel, kernels::KernelKind::AtomKernelU);
  check_positive(o.alpha, "--alpha");
  check_positive(o.d, "--d");
  numerics::QuadratureSpec{ o.quad_nodes, o.tolerance }.validate();
  if (o.g)
    check_positive(*o.g, "--g");
  if (o.epsilon)
    require(*o.epsilon > 0.0 && *o.epsilon < 1.0, "--epsilon must lie in (0, 1)");
  const auto fixed_g = parse_bandwidth(o.bandwidth);
  kernels::validate_u_kernel(u, o.alpha);

  const estimators::Sample sample(io::read_sample_csv(o.input));
  const auto n = static_cast<std::uint64_t>(sample.size());

  double g = 0.0;
  double eps = 0.0;
  if (o.g || fixed_g) {
    g = o.g ? *o.g : *fixed_g;
    eps = tuning::epsilon_schedule(n);
  } else {
    const auto preset =
      tuning::auto_preset(model.classification(), tuning::Quantity::AtomP);
    const auto sched =
      tuning::schedule_for(preset, n, o.alpha, model.classification(), o.d);
    g = sched.g;
    eps = sched.epsilon;
  }
  if (o.epsilon)
    eps = *o.epsilon;

  const auto est = estimators::estimate_p_detailed(
    sample.values(), g, u, model, o.quad_nodes, o.tolerance);
  io::JsonObject json;
  json.add("p_raw", est.value)
    .add("p_clamped", estimators::clamp_p(est.value, eps))
    .add("p_plus", estimators::positive_part_p(est.value))
    .add("g", g)
    .add("epsilon", eps)
    .add("n", n);
  io::write_atomic(o.output, json.dump() + "\n");
  return kExitOk;
}

// -- estimate-f --------------------------------------------------------------

struct EstimateFOptions
{
  std::string input;
  std::string noise;
  std::string kernel_u = "paper-u";
  std::string kernel_w;
  double alpha = 6.0;
  std::string bandwidth = "auto";
  std::optional<double> g;
  std::optional<double> h;
  std::optional<double> epsilon;
  std::string split = "auto";
  double d = 1.0;
  std::size_t quad_nodes = 4096;
  double tolerance = 1e-7;
  bool positive = false;
  bool renormalize = false;
  GridOptions grid;
  std::string output = "-";
};

void
attach(CLI::App* app, EstimateFOptions& o)
{
  app->add_option("--input", o.input, "Sample file, one value per line")
    ->required();
  app->add_option("--noise", o.noise, "gaussian:<sigma> or laplace:<b>")
    ->required();
  app->add_option("--kernel-u", o.kernel_u, "Atom kernel id")
    ->capture_default_str();
  app->add_option("--kernel-w", o.kernel_w,
                  "Density kernel id (default poly-w:<alpha>)");
  app->add_option("--alpha", o.alpha, "Smoothness index")->capture_default_str();
  app->add_option("--bandwidth", o.bandwidth, "'auto' or a common value of g and h")
    ->capture_default_str();
  app->add_option("--g", o.g, "Explicit atom bandwidth");
  app->add_option("--h", o.h, "Explicit density bandwidth");
  app->add_option("--epsilon", o.epsilon, "Truncation level");
  app->add_option("--split", o.split, "Sample splitting: auto, on or off")
    ->check(CLI::IsMember({ "auto", "on", "off" }))
    ->capture_default_str();
  app->add_option("--d", o.d, "Bandwidth constant")->capture_default_str();
  app->add_option("--quad-nodes", o.quad_nodes, "Simpson panels")
    ->capture_default_str();
  app->add_option("--tolerance", o.tolerance, "Refinement tolerance")
    ->capture_default_str();
  app->add_flag("--positive", o.positive, "Clip negative values to zero");
  app->add_flag("--renormalize", o.renormalize,
                "With --positive, rescale to unit mass");
  o.grid.attach(app);
  app->add_option("--output", o.output, "CSV output path ('-' for stdout)")
    ->capture_default_str();
}

int
run_estimate_f(const EstimateFOptions& o)
{
  const auto model = noise::parse_noise(o.noise);
  check_positive(o.alpha, "--alpha");
  check_positive(o.d, "--d");
  const auto u =
    kernels::parse_kernel(o.kernel_u, kernels::KernelKind::AtomKernelU);
  const auto w = o.kernel_w.empty()
                   ? kernels::poly_w_kernel(o.alpha)
                   : kernels::parse_kernel(o.kernel_w,
                                           kernels::KernelKind::DensityKernelW);
  if (o.g)
    check_positive(*o.g, "--g");
  if (o.h)
    check_positive(*o.h, "--h");
  if (o.epsilon)
    require(*o.epsilon > 0.0 && *o.epsilon < 1.0, "--epsilon must lie in (0, 1)");
  require(!o.renormalize || o.positive, "--renormalize needs --positive");
  const auto fixed = parse_bandwidth(o.bandwidth);
  const auto grid = o.grid.build();
  kernels::validate_u_kernel(u, o.alpha);
  kernels::validate_w_kernel(w, o.alpha);

  const estimators::Sample sample(io::read_sample_csv(o.input));
  const auto n = static_cast<std::uint64_t>(sample.size());

  estimators::EstimationConfig cfg;
  cfg.quad_nodes = o.quad_nodes;
  cfg.tolerance = o.tolerance;
  if (fixed) {
    cfg.g = cfg.h = *fixed;
    cfg.epsilon = tuning::epsilon_schedule(n);
    cfg.split = false;
  } else {
    const auto preset =
      tuning::auto_preset(model.classification(), tuning::Quantity::DensityF);
    const auto sched =
      tuning::schedule_for(preset, n, o.alpha, model.classification(), o.d);
    cfg.g = sched.g;
    cfg.h = sched.h;
    cfg.epsilon = sched.epsilon;
    cfg.split = sched.split;
  }
  if (o.g)
    cfg.g = *o.g;
  if (o.h)
    cfg.h = *o.h;
  if (o.epsilon)
    cfg.epsilon = *o.epsilon;
  if (o.split != "auto")
    cfg.split = o.split == "on";
  cfg.validate();

  auto est = estimators::estimate_f(sample, cfg, w, u, model, grid);
  if (o.positive)
    est = estimators::positive_part_density(std::move(est), o.renormalize);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    rows.push_back({ format_double(est.grid[i]), format_double(est.values[i]) });
  io::write_atomic(o.output, csv({ "x", "f_hat" }, rows));
  return kExitOk;
}

// -- rates -------------------------------------------------------------------

struct RatesOptions
{
  std::string preset = "auto";
  std::string quantity = "p";
  std::string noise;
  std::string target = "std-normal";
  double p = 0.3;
  std::vector<std::uint64_t> ns;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  double alpha = 6.0;
  double d = 1.0;
  std::string variant = "clamped";
  std::string kernel_u = "paper-u";
  std::string kernel_w;
  std::size_t quad_nodes = 4096;
  unsigned threads = 1;
  GridOptions grid;
  std::string output = "rates.csv";
  std::string sidecar;
};

void
attach(CLI::App* app, RatesOptions& o)
{
  app->add_option("--preset", o.preset, "Tuning preset or 'auto'")
    ->capture_default_str();
  app->add_option("--quantity", o.quantity, "With --preset auto: p or f")
    ->check(CLI::IsMember({ "p", "f" }))
    ->capture_default_str();
  app->add_option("--noise", o.noise, "gaussian:<sigma> or laplace:<b>")
    ->required();
  app->add_option("--target", o.target, "std-normal or cauchy")
    ->capture_default_str();
  app->add_option("--p", o.p, "Atom mass")->capture_default_str();
  app->add_option("--ns", o.ns, "Comma-separated sample sizes")
    ->delimiter(',')
    ->required();
  app->add_option("--replicates", o.replicates, "Replicates per sample size")
    ->capture_default_str();
  app->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app->add_option("--alpha", o.alpha, "Smoothness index")->capture_default_str();
  app->add_option("--d", o.d, "Bandwidth constant")->capture_default_str();
  app->add_option("--variant", o.variant, "Atom estimator: raw, clamped, positive")
    ->capture_default_str();
  app->add_option("--kernel-u", o.kernel_u, "Atom kernel id")
    ->capture_default_str();
  app->add_option("--kernel-w", o.kernel_w,
                  "Density kernel id (default poly-w:<alpha>)");
  app->add_option("--quad-nodes", o.quad_nodes, "Simpson panels")
    ->capture_default_str();
  app->add_option("--threads", o.threads, "Worker threads")
    ->envname("ATOMDECONV_THREADS")
    ->capture_default_str();
  o.grid.attach(app);
  app->add_option("--output", o.output, "CSV output path ('-' for stdout)")
    ->capture_default_str();
  app->add_option("--sidecar", o.sidecar,
                  "JSON metadata path (default <output>.json)");
}

int
run_rates(const RatesOptions& o, std::ostream& err)
{
  const auto model = noise::parse_noise(o.noise);
  check_positive(o.alpha, "--alpha");
  check_positive(o.d, "--d");
  require(o.threads >= 1, "--threads must be at least 1");
  numerics::QuadratureSpec{ o.quad_nodes, 1e-7 }.validate();
  const auto preset =
    o.preset == "auto"
      ? tuning::auto_preset(model.classification(),
                            o.quantity == "p" ? tuning::Quantity::AtomP
                                              : tuning::Quantity::DensityF)
      : tuning::parse_preset(o.preset);
  const auto quantity = tuning::quantity_of(preset);
  const auto variant = simulate::parse_variant(o.variant);

  simulate::ExperimentConfig cfg;
  cfg.preset = preset;
  cfg.alpha = o.alpha;
  cfg.d = o.d;
  cfg.quad_nodes = o.quad_nodes;
  cfg.threads = o.threads;
  cfg.u = kernels::parse_kernel(o.kernel_u, kernels::KernelKind::AtomKernelU);
  cfg.w = o.kernel_w.empty()
            ? kernels::poly_w_kernel(o.alpha)
            : kernels::parse_kernel(o.kernel_w,
                                    kernels::KernelKind::DensityKernelW);
  kernels::validate_u_kernel(cfg.u, o.alpha);
  if (quantity == tuning::Quantity::DensityF)
    kernels::validate_w_kernel(cfg.w, o.alpha);

  simulate::ModelSpec spec{ o.p, simulate::lookup_target(o.target, o.alpha),
                            model };
  spec.validate();
  // Schedules must be defined for every requested n before any work starts.
  for (auto n : o.ns)
    tuning::schedule_for(preset, n, o.alpha, model.classification(), o.d);

  const auto report =
    quantity == tuning::Quantity::AtomP
      ? simulate::mc_risk_p(spec, o.ns, o.replicates, cfg, variant, o.seed)
      : simulate::mc_risk_f(spec, o.ns, o.replicates, cfg, o.grid.build(),
                            o.seed);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> diagnostics;
  const simulate::RiskRow* failed = nullptr;
  for (const auto& r : report.rows) {
    rows.push_back({ std::to_string(r.n), format_double(r.risk_mean),
                     format_double(r.risk_se), std::to_string(r.replicates) });
    if (!r.ok()) {
      diagnostics.push_back("n=" + std::to_string(r.n) + ": " + r.diagnostic);
      if (!failed)
        failed = &r;
    }
  }

  const auto rate = tuning::theoretical_rate(
    { o.alpha, model.classification(), quantity });
  io::JsonObject model_json;
  model_json.add("p", o.p)
    .add("target", o.target)
    .add("noise", o.noise)
    .add("alpha", o.alpha)
    .add("d", o.d)
    .add("kernel_u", cfg.u.name())
    .add("kernel_w", cfg.w.name());

  io::JsonObject fit_json;
  const bool ordinary = noise::is_ordinary(model.classification());
  std::optional<simulate::RateFit> fit;
  if (ordinary && !failed && report.rows.size() >= 3) {
    try {
      fit = simulate::fit_rate(report, tuning::RateScale::PolyInN);
    } catch (const Error&) {
      // Zero risk rows cannot be fitted on a log scale; reported as null.
    }
  }

  io::JsonObject side;
  side.add("preset", tuning::to_string(preset))
    .add("quantity", quantity == tuning::Quantity::AtomP ? "p" : "f")
    .add("seed", o.seed)
    .add("replicates", static_cast<std::uint64_t>(o.replicates))
    .add("ns", o.ns)
    .add("model", model_json)
    .add("quad_nodes", static_cast<std::uint64_t>(o.quad_nodes));
  if (quantity == tuning::Quantity::AtomP)
    side.add("variant", simulate::to_string(variant));
  side.add("theoretical_scale",
           rate.scale == tuning::RateScale::PolyInN ? "log-n" : "log-log-n")
    .add("theoretical_exponent", rate.exponent);
  if (fit)
    side.add("fitted_slope", fit->slope)
      .add("fitted_intercept", fit->intercept)
      .add("fitted_r_squared", fit->r_squared);
  else
    side.add_null("fitted_slope");
  side.add("non_increasing_within_2se",
           !failed && simulate::non_increasing_within_2se(report))
    .add("diagnostics", diagnostics);

  const std::string sidecar =
    !o.sidecar.empty() ? o.sidecar
                       : (o.output == "-" ? std::string() : o.output + ".json");
  io::write_atomic(o.output, csv({ "n", "risk_mean", "risk_se", "replicates" },
                                 rows));
  if (!sidecar.empty())
    io::write_atomic(sidecar, side.dump() + "\n");

  if (failed) {
    err << "error: code=" << to_string(failed->failure)
        << " message=" << io::json_quote(failed->diagnostic) << "\n";
    return category_of(failed->failure) == ErrorCategory::numerical
             ? kExitNumerical
             : kExitValidation;
  }
  return kExitOk;
}

// -- lowerbound --------------------------------------------------------------

struct LowerBoundOptions
{
  std::string noise = "gaussian:1";
  double lambda = 1.0;
  double alpha = 0.5;
  std::string mode = "auto";
  double c = 0.5;
  std::optional<double> beta;
  std::vector<std::uint64_t> ns{ 1000, 10000, 100000, 1000000 };
  double cutoff = 50.0;
  double grid_step = 0.02;
  std::size_t quad_nodes = 16384;
  std::string output = "-";
};

void
attach(CLI::App* app, LowerBoundOptions& o)
{
  app->add_option("--noise", o.noise, "gaussian:<sigma> or laplace:<b>")
    ->capture_default_str();
  app->add_option("--lambda", o.lambda, "Poisson intensity")
    ->capture_default_str();
  app->add_option("--alpha", o.alpha, "Smoothness index")->capture_default_str();
  app->add_option("--mode", o.mode, "delta schedule: auto, log or poly")
    ->check(CLI::IsMember({ "auto", "log", "poly" }))
    ->capture_default_str();
  app->add_option("--c", o.c, "delta schedule constant")->capture_default_str();
  app->add_option("--beta", o.beta, "Noise decay exponent for the poly schedule");
  app->add_option("--ns", o.ns, "Comma-separated sample sizes")
    ->delimiter(',')
    ->capture_default_str();
  app->add_option("--cutoff", o.cutoff, "Half-width of the x grid")
    ->capture_default_str();
  app->add_option("--grid-step", o.grid_step, "x grid spacing")
    ->capture_default_str();
  app->add_option("--quad-nodes", o.quad_nodes, "Simpson panels")
    ->capture_default_str();
  app->add_option("--output", o.output, "CSV output path ('-' for stdout)")
    ->capture_default_str();
}

int
run_lowerbound(const LowerBoundOptions& o)
{
  const auto model = noise::parse_noise(o.noise);
  const bool ordinary = noise::is_ordinary(model.classification());
  lowerbound::DivergenceStudy study;
  study.lambda = o.lambda;
  study.alpha = o.alpha;
  study.c = o.c;
  study.cutoff = o.cutoff;
  study.grid_step = o.grid_step;
  study.quad_nodes = o.quad_nodes;
  const std::string mode = o.mode != "auto" ? o.mode : (ordinary ? "poly" : "log");
  study.mode = mode == "log" ? lowerbound::DeltaMode::SupersmoothLog
                             : lowerbound::DeltaMode::OrdinaryPoly;
  study.beta = o.beta ? *o.beta : noise::decay_exponent(model.classification());
  check_positive(o.lambda, "--lambda");
  check_positive(o.alpha, "--alpha");
  check_positive(o.cutoff, "--cutoff");
  check_positive(o.grid_step, "--grid-step");
  numerics::QuadratureSpec{ o.quad_nodes, 1e-7 }.validate();
  require(!o.ns.empty(), "--ns needs at least one sample size");
  for (auto n : o.ns) {
    const double delta =
      lowerbound::delta_schedule(n, study.mode, study.c, study.alpha, study.beta);
    lowerbound::AlternativePair(study.lambda, delta, study.alpha);
  }

  const auto table = lowerbound::divergence_table(study, model, o.ns);
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table)
    rows.push_back({ format_double(r.delta), std::to_string(r.n),
                     format_double(r.chi_sq), format_double(r.n_times_chi_sq),
                     format_double(r.separation), format_double(r.tail_bound) });
  io::write_atomic(o.output,
                   csv({ "delta", "n", "chi_sq", "n_times_chi_sq", "separation",
                         "tail_bound" },
                       rows));
  return kExitOk;
}

// -- validate-kernel ---------------------------------------------------------

struct ValidateKernelOptions
{
  std::string kernel;
  double alpha = 6.0;
  std::string role = "auto";
  std::size_t grid_size = kernels::kDefaultValidationGrid;
  std::string output = "-";
};

void
attach(CLI::App* app, ValidateKernelOptions& o)
{
  app->add_option("--kernel", o.kernel, "paper-u, sinc or poly-w:<alpha>")
    ->required();
  app->add_option("--alpha", o.alpha, "Smoothness index")->capture_default_str();
  app->add_option("--role", o.role, "auto, atom or density")
    ->check(CLI::IsMember({ "auto", "atom", "density" }))
    ->capture_default_str();
  app->add_option("--grid-size", o.grid_size, "Grid points per unit interval")
    ->capture_default_str();
  app->add_option("--output", o.output, "JSON output path ('-' for stdout)")
    ->capture_default_str();
}

int
run_validate_kernel(const ValidateKernelOptions& o)
{
  const bool density =
    o.role == "density" ||
    (o.role == "auto" && o.kernel.rfind("poly-w", 0) == 0);
  const auto kind = density ? kernels::KernelKind::DensityKernelW
                            : kernels::KernelKind::AtomKernelU;
  const auto kernel = kernels::parse_kernel(o.kernel, kind);
  io::JsonObject json;
  json.add("kernel", kernel.name());
  if (density) {
    const auto v = kernels::validate_w_kernel(kernel, o.alpha, o.grid_size);
    json.add("role", "density")
      .add("alpha", v.alpha)
      .add("w_bound", v.w_bound)
      .add("phi_at_zero", v.phi_at_zero)
      .add("square_integral", v.square_integral);
  } else {
    const auto v = kernels::validate_u_kernel(kernel, o.alpha, o.grid_size);
    json.add("role", "atom")
      .add("alpha", v.alpha)
      .add("u_bound", v.u_bound)
      .add("integral", v.integral);
  }
  io::write_atomic(o.output, json.dump() + "\n");
  return kExitOk;
}

void
report(std::ostream& err, std::string_view code, std::string_view message)
{
  err << "error: code=" << code << " message=" << io::json_quote(message)
      << "\n";
}

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& err)
{
  try {
    const auto expanded = expand_config(args);

    CLI::App app{ "Deconvolution of atomic distributions" };
    app.require_subcommand(1);
    // --config is consumed before parsing; declared so --help lists it.
    std::string config_path;
    app.add_option("--config", config_path, "key = value file; flags override");

    EstimatePOptions ep;
    EstimateFOptions ef;
    RatesOptions ra;
    LowerBoundOptions lb;
    ValidateKernelOptions vk;
    auto* cmd_p = app.add_subcommand("estimate-p", "Estimate the atom mass");
    auto* cmd_f = app.add_subcommand("estimate-f", "Estimate the density");
    auto* cmd_r = app.add_subcommand("rates", "Monte-Carlo risk table");
    auto* cmd_l = app.add_subcommand("lowerbound", "Divergence table");
    auto* cmd_k = app.add_subcommand("validate-kernel", "Kernel constants");
    // --h is the density bandwidth, so help is --help only.
    for (auto* cmd : { cmd_p, cmd_f, cmd_r, cmd_l, cmd_k })
      cmd->set_help_flag("--help", "Print this help message and exit");
    attach(cmd_p, ep);
    attach(cmd_f, ef);
    attach(cmd_r, ra);
    attach(cmd_l, lb);
    attach(cmd_k, vk);

    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    if (!reversed.empty())
      reversed.pop_back(); // program name
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      std::cout << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      std::cout << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      report(err, "ParseError", e.what());
      return kExitValidation;
    }

    if (cmd_p->parsed())
      return run_estimate_p(ep);
    if (cmd_f->parsed())
      return run_estimate_f(ef);
    if (cmd_r->parsed())
      return run_rates(ra, err);
    if (cmd_l->parsed())
      return run_lowerbound(lb);
    return run_validate_kernel(vk);
  } catch (const Error& e) {
    report(err, to_string(e.code()), e.what());
    return e.category() == ErrorCategory::numerical ? kExitNumerical
                                                    : kExitValidation;
  } catch (const std::exception& e) {
    report(err, "InvalidArgument", e.what());
    return kExitValidation;
  }
}

int
run(const std::vector<std::string>& args)
{
  return run(args, std::cerr);
}

} // namespace atomdeconv::cli
