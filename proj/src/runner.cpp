#include "semipress/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "semipress/acceptance.hpp"
#include "semipress/bowen.hpp"
#include "semipress/config.hpp"
#include "semipress/kernel.hpp"
#include "semipress/local_measure.hpp"
#include "semipress/lyapunov.hpp"
#include "semipress/skew.hpp"

namespace semipress {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + (dir_ / name).string());
    return out;
  }

 private:
  fs::path dir_;
};

void write_manifest(const OutputDir& out, const RunOptions& opts, const Json& config,
                    std::uint64_t seed) {
  Json manifest;
  manifest["command"] = opts.command;
  manifest["version"] = kVersion;
  manifest["seed"] = seed;
  manifest["threads"] = opts.threads;
  manifest["config"] = config;
  auto f = out.open("manifest.json");
  f << manifest.dump(2) << "\n";
}

void write_estimate_csvs(const OutputDir& out, const PressureEstimate& est) {
  {
    auto f = out.open("cells.csv");
    f << "variant,N,epsilon,n_words,log_avg_sum,stderr\n";
    for (const auto& c : est.per_cell)
      f << c.variant << "," << c.word_length << "," << fmt(c.epsilon) << "," << c.n_words
        << "," << fmt(c.log_avg_sum) << "," << fmt(c.stderr_) << "\n";
  }
  {
    auto f = out.open("fits.csv");
    f << "epsilon,slope,intercept,residual,local_slope_min,local_slope_max,resolved\n";
    for (const auto& e : est.fits)
      f << fmt(e.epsilon) << "," << fmt(e.fit.slope) << "," << fmt(e.fit.intercept) << ","
        << fmt(e.fit.residual) << "," << fmt(e.fit.local_slope_min) << ","
        << fmt(e.fit.local_slope_max) << "," << (e.resolved ? 1 : 0) << "\n";
  }
}

int exit_code_for(const Flags& flags) {
  if (flags.has(Flag::warn_nonexpanding) || flags.has(Flag::cover_fail)) return 4;
  if (flags.has(Flag::unresolved) || flags.has(Flag::nonmonotone) ||
      flags.has(Flag::zero_mass) || flags.has(Flag::truncated))
    return 3;
  return 0;
}

struct LoadedConfig {
  Json raw;
  SemigroupSystem system;
  SampleCloud cloud;
  Schedule schedule;
};

LoadedConfig load_common(const RunOptions& opts) {
  if (opts.config_path.empty()) throw ConfigError("--config is required for this command");
  std::ifstream in(opts.config_path);
  if (!in) throw ConfigError("cannot read config file: " + opts.config_path);
  Json raw;
  try {
    in >> raw;
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  SemigroupSystem sys = parse_system(raw);
  Schedule schedule = parse_schedule(raw);
  if (opts.seed_override) schedule.seed = *opts.seed_override;
  SampleCloud cloud = discretize(parse_region(raw), parse_resolution(raw));
  return LoadedConfig{std::move(raw), std::move(sys), std::move(cloud),
                      std::move(schedule)};
}

int run_pressure_like(const RunOptions& opts, bool zero_potential) {
  LoadedConfig cfg = load_common(opts);
  OutputDir out(opts.out_dir);
  write_manifest(out, opts, cfg.raw, cfg.schedule.seed);

  std::string route = cfg.raw.value("route", "capacity");
  PressureEstimate est;
  if (zero_potential) {
    est = entropy(cfg.system, cfg.cloud, cfg.schedule, opts.threads);
  } else if (route == "caratheodory") {
    est = caratheodory_pressure(cfg.system, cfg.system.potentials, cfg.cloud, cfg.schedule,
                                opts.threads);
  } else if (route == "capacity") {
    const std::string variant = cfg.raw.value("variant", "separated");
    if (variant != "separated" && variant != "spanning")
      throw ConfigError("/variant: expected 'separated' or 'spanning'");
    est = capacity_pressure(cfg.system, cfg.system.potentials, cfg.cloud, cfg.schedule,
                            variant == "separated" ? SumVariant::separated
                                                   : SumVariant::spanning,
                            opts.threads);
  } else {
    throw ConfigError("/route: expected 'capacity' or 'caratheodory'");
  }

  write_estimate_csvs(out, est);
  double uncertainty = 0.01;
  for (const auto& f : est.fits) uncertainty = std::max(uncertainty, f.fit.residual);
  auto sum = out.open("summary.txt");
  char line[160];
  std::snprintf(line, sizeof(line), "%s = %.3f +- %.2f  [%s, %s]\n",
                zero_potential ? "h" : "P", est.value, uncertainty, est.mode.c_str(),
                est.flags.str().c_str());
  sum << line;
  if (opts.verbose) std::cout << line;
  return exit_code_for(est.flags);
}

int run_bowen_root(const RunOptions& opts) {
  LoadedConfig cfg = load_common(opts);
  OutputDir out(opts.out_dir);
  write_manifest(out, opts, cfg.raw, cfg.schedule.seed);
  const double t_tol = cfg.raw.value("t_tol", 0.01);
  const double p_tol = cfg.raw.value("p_tol", 0.02);

  const BowenResult res = bowen_root(cfg.system, cfg.cloud, cfg.schedule, t_tol, p_tol,
                                     opts.threads);
  {
    auto f = out.open("trace.csv");
    f << "t,pressure\n";
    for (const auto& [t, p] : res.pressure_trace) f << fmt(t) << "," << fmt(p) << "\n";
  }
  auto sum = out.open("summary.txt");
  char line[240];
  if (std::isnan(res.t_star)) {
    std::snprintf(line, sizeof(line), "t* undefined  [%s, alpha=%.4f, beta=%.4f]\n",
                  res.flags.str().c_str(), res.alpha, res.beta);
  } else {
    std::snprintf(line, sizeof(line),
                  "t* = %.2f +- %.2f  [h=%.4f, alpha=%.4f, beta=%.4f, box_dim=%.4f]\n",
                  res.t_star, t_tol, res.entropy_value, res.alpha, res.beta,
                  res.dim_box.value_or(std::nan("")));
  }
  sum << line;
  if (res.dim_moran) sum << "moran_dim = " << fmt(*res.dim_moran) << "\n";
  if (opts.verbose) std::cout << line;
  if (std::isnan(res.t_star)) return 4;
  return exit_code_for(res.flags) == 3 ? 3 : 0;
}

int run_lyapunov(const RunOptions& opts, bool classify) {
  LoadedConfig cfg = load_common(opts);
  OutputDir out(opts.out_dir);
  write_manifest(out, opts, cfg.raw, cfg.schedule.seed);
  const double x = require_field(cfg.raw, "x", "").get<double>();
  const int n_max = require_field(cfg.raw, "n_max", "").get<int>();
  std::vector<double> margin_eps = {0.1, 0.05};
  if (cfg.raw.contains("margin_epsilons"))
    margin_eps = cfg.raw.at("margin_epsilons").get<std::vector<double>>();

  LyapunovReport rep;
  if (classify) {
    const double tau = require_field(cfg.raw, "tau", "").get<double>();
    std::optional<std::pair<double, double>> interval;
    if (cfg.raw.contains("interval")) {
      auto iv = cfg.raw.at("interval").get<std::vector<double>>();
      if (iv.size() != 2) throw ConfigError("/interval: expected [lo, hi]");
      interval = std::make_pair(iv[0], iv[1]);
    }
    rep = classify_point(cfg.system, x, n_max, tau, interval, margin_eps,
                         cfg.raw.value("m_cap", 20.0), cfg.schedule.word_budget);
  } else {
    rep.x = x;
    rep.n_max = n_max;
    rep.envelope = lyapunov_envelope(cfg.system, x, n_max, cfg.schedule.word_budget,
                                     cfg.schedule.seed);
    for (double e : margin_eps)
      rep.tempered_margins.emplace_back(
          e, tempered_margin(cfg.system, x, e, n_max, cfg.schedule.word_budget));
  }

  {
    auto f = out.open("envelope.csv");
    f << "n,min_lambda,max_lambda,words,exhaustive\n";
    for (const auto& e : rep.envelope)
      f << e.n << "," << fmt(e.min_lambda) << "," << fmt(e.max_lambda) << "," << e.words
        << "," << (e.exhaustive ? 1 : 0) << "\n";
  }
  {
    auto f = out.open("margins.csv");
    f << "epsilon,margin\n";
    for (const auto& [e, m] : rep.tempered_margins) f << fmt(e) << "," << fmt(m) << "\n";
  }
  auto sum = out.open("summary.txt");
  sum << "x = " << fmt(x) << ", n_max = " << n_max << "\n";
  if (classify) {
    sum << "in_A_positive = " << (rep.in_A_positive ? "true" : "false") << "\n";
    if (rep.interval_E)
      sum << "in_A_interval = " << (rep.in_A_interval ? "true" : "false") << "\n";
    sum << "in_B = " << (rep.in_B ? "true" : "false") << "\n";
  }
  return exit_code_for(rep.flags);
}

int run_local_pressure(const RunOptions& opts) {
  LoadedConfig cfg = load_common(opts);
  OutputDir out(opts.out_dir);
  write_manifest(out, opts, cfg.raw, cfg.schedule.seed);
  const MeasureModel mu = parse_measure(cfg.raw, cfg.schedule.seed);
  auto horizons = require_field(cfg.raw, "horizons", "").get<std::vector<int>>();
  auto radii = require_field(cfg.raw, "radii", "").get<std::vector<double>>();
  std::vector<double> xs;
  if (cfg.raw.contains("x_values")) xs = cfg.raw.at("x_values").get<std::vector<double>>();
  else xs.push_back(require_field(cfg.raw, "x", "").get<double>());

  Flags flags;
  auto f = out.open("local.csv");
  f << "x,n,r,extreme,value\n";
  auto sum = out.open("summary.txt");
  for (double x : xs) {
    const LocalPressureReport rep = local_pressure(mu, cfg.system, cfg.system.potentials,
                                                   x, horizons, radii,
                                                   cfg.schedule.word_budget);
    flags.merge(rep.flags);
    for (const auto& c : rep.cells) {
      f << fmt(x) << "," << c.horizon << "," << fmt(c.radius) << ",lower,"
        << fmt(c.lower) << "\n";
      f << fmt(x) << "," << c.horizon << "," << fmt(c.radius) << ",upper,"
        << fmt(c.upper) << "\n";
    }
    sum << "x = " << fmt(x) << ": P_lower = " << fmt(rep.lower_value)
        << ", P_upper = " << fmt(rep.upper_value) << " [" << rep.flags.str() << "]\n";
  }
  return exit_code_for(flags);
}

int run_skew_check(const RunOptions& opts) {
  LoadedConfig cfg = load_common(opts);
  OutputDir out(opts.out_dir);
  write_manifest(out, opts, cfg.raw, cfg.schedule.seed);
  Potential phi = Zero{};
  if (cfg.raw.contains("potential")) phi = parse_potential(cfg.raw.at("potential"), "/potential");
  const double c = cfg.raw.value("c", 0.0);
  const double tol = cfg.raw.value("tol", 0.1);
  const bool one_sided = cfg.raw.value("one_sided", false);

  const SkewIdentityReport rep = verify_theorem_identity(cfg.system, phi, c, cfg.cloud,
                                                         cfg.schedule, tol, one_sided,
                                                         opts.threads);
  {
    auto f = out.open("skew.csv");
    f << "N,epsilon,window_k,sep_multiplicity,span_multiplicity,log_skew_sep_sum,"
         "log_fiber_sep_sum,log_skew_span_sum,log_fiber_span_sum,sandwich\n";
    for (const auto& cell : rep.cells)
      f << cell.word_length << "," << fmt(cell.epsilon) << "," << cell.window_k << ","
        << fmt(cell.sep_multiplicity) << "," << fmt(cell.span_multiplicity) << ","
        << fmt(cell.log_skew_sep_sum) << "," << fmt(cell.log_fiber_sep_sum) << ","
        << fmt(cell.log_skew_span_sum) << "," << fmt(cell.log_fiber_span_sum) << ","
        << (cell.sandwich_holds ? 1 : 0) << "\n";
  }
  auto sum = out.open("summary.txt");
  sum << "skew = " << fmt(rep.lhs) << ", log m + fiber + c = " << fmt(rep.rhs)
      << ", pass = " << (rep.pass ? "true" : "false") << "\n";
  if (opts.verbose)
    std::cout << "skew identity: lhs=" << rep.lhs << " rhs=" << rep.rhs
              << " pass=" << rep.pass << "\n";
  return exit_code_for(rep.flags);
}

int run_dimension(const RunOptions& opts) {
  LoadedConfig cfg = load_common(opts);
  OutputDir out(opts.out_dir);
  write_manifest(out, opts, cfg.raw, cfg.schedule.seed);
  auto scales = require_field(cfg.raw, "scales", "").get<std::vector<double>>();
  const auto counts = box_counts(cfg.cloud, scales);
  const double dim = box_counting_dimension(cfg.cloud, scales);
  {
    auto f = out.open("boxdim.csv");
    f << "scale,box_count\n";
    for (std::size_t k = 0; k < scales.size(); ++k)
      f << fmt(scales[k]) << "," << counts[k] << "\n";
  }
  auto sum = out.open("summary.txt");
  sum << "box_dim = " << fmt(dim) << " [PROXY]\n";
  if (const auto* cr = std::get_if<CantorRegion>(&cfg.cloud.source)) {
    std::vector<double> ratios;
    for (int j : cr->branches) {
      const auto [lo, hi] = branch_interval(cr->base, j);
      ratios.push_back(hi - lo);
    }
    sum << "moran_dim = " << fmt(moran_dimension(ratios)) << "\n";
  }
  return 0;
}

int run_acceptance_cmd(const RunOptions& opts) {
  OutputDir out(opts.out_dir);
  std::ostringstream log;
  const AcceptanceReport rep = run_acceptance(log, opts.threads);
  auto f = out.open("acceptance.txt");
  f << log.str();
  std::cout << log.str();
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int run_command(const RunOptions& opts) {
  try {
    if (opts.command == "pressure") return run_pressure_like(opts, false);
    if (opts.command == "entropy") return run_pressure_like(opts, true);
    if (opts.command == "bowen-root") return run_bowen_root(opts);
    if (opts.command == "lyapunov") return run_lyapunov(opts, false);
    if (opts.command == "classify") return run_lyapunov(opts, true);
    if (opts.command == "local-pressure") return run_local_pressure(opts);
    if (opts.command == "skew-check") return run_skew_check(opts);
    if (opts.command == "dimension") return run_dimension(opts);
    if (opts.command == "acceptance") return run_acceptance_cmd(opts);
    std::cerr << "unknown command: " << opts.command << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace semipress
