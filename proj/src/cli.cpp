#include "shiftpois/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

#include "shiftpois/bench.hpp"
#include "shiftpois/config.hpp"
#include "shiftpois/errors.hpp"
#include "shiftpois/invariants.hpp"
#include "shiftpois/io.hpp"
#include "shiftpois/oracle.hpp"
#include "shiftpois/simulate.hpp"
#include "shiftpois/spectral.hpp"
#include "shiftpois/threshold.hpp"

namespace shiftpois::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  unsigned workers = 0;
  std::size_t grid = 1024;
};

struct Options {
  Common common;
  bool keep_shifts = false;
  std::string data_path;
  std::optional<double> gamma, delta;
  bool clip = false;
  std::optional<std::string> levels;
  std::optional<long> M;
  LowerBoundDemoSpec demo;
};

unsigned workers_of(const Common& c) { return c.workers ? c.workers : default_workers(); }

RunConfig load_config(const Common& c) {
  if (c.config_path.empty()) throw ConfigError("--config is required");
  return parse_run_config(read_file(c.config_path));
}

std::uint64_t seed_of(const Common& c, const RunConfig& rc) {
  if (c.seed) return *c.seed;
  return rc.seed().value_or(0);
}

void check_grid(std::size_t grid, long max_freq) {
  if (!is_power_of_two(grid)) throw ConfigError("--grid must be a power of two");
  if (static_cast<long>(grid) < 2 * max_freq)
    throw ConfigError("--grid " + std::to_string(grid) + " too small for frequency " +
                      std::to_string(max_freq));
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const RunConfig rc = load_config(o.common);
  const std::size_t n = rc.n();
  const auto lambda = rc.intensity();
  const auto g = rc.shift();
  const std::uint64_t seed = seed_of(o.common, rc);
  const auto data = sample_dataset(lambda, g, n, {seed, 0}, true, workers_of(o.common));
  const fs::path path = fs::path(o.common.out_dir) / "trajectories.jsonl";
  write_file_atomic(path, trajectories_to_jsonl(data, rc.text, seed, o.keep_shifts));
  out << "wrote " << path.string() << " (" << n << " trajectories, " << data.total_events()
      << " events)\n";
  return kExitOk;
}

// Config from --config, else the header of the data file.
std::pair<RunConfig, TrajectoryFile> load_data(const Options& o) {
  if (o.data_path.empty()) throw ConfigError("--data is required");
  TrajectoryFile file = trajectories_from_jsonl(read_file(o.data_path));
  RunConfig rc = o.common.config_path.empty() ? parse_run_config(file.config_json)
                                              : load_config(o.common);
  return {std::move(rc), std::move(file)};
}

int cmd_estimate(const Options& o, std::ostream& out) {
  auto [rc, file] = load_data(o);
  const auto g = rc.shift();
  ThresholdParams p;
  if (rc.raw.contains("estimator")) {
    const auto est = rc.estimator();
    if (const auto* a = std::get_if<Adaptive>(&est)) p = a->params;
  }
  if (o.gamma) p.gamma = *o.gamma;
  if (o.delta) p.delta = *o.delta;
  if (o.clip) p.clip_negative = true;
  if (o.levels) p.schedule = parse_schedule(*o.levels);
  const std::uint64_t seed = o.common.seed.value_or(file.seed);

  const auto res = adaptive_estimate(file.data, g, p);
  check_grid(o.common.grid, res.estimate.coefficients.max_freq());
  const auto grid = res.estimate.on_grid(o.common.grid);

  Json diag;
  diag["config"] = rc.raw;
  diag["seed"] = seed;
  const auto& d = res.diagnostics;
  diag["j0"] = d.levels.j0;
  diag["j1"] = d.levels.j1;
  diag["levels_extended"] = d.levels.extended;
  diag["gamma"] = p.gamma;
  diag["delta"] = p.delta;
  diag["clip"] = p.clip_negative;
  diag["k_tilde"] = d.k_tilde;
  diag["thresholds"] = d.thresholds;
  diag["kept"] = d.kept;
  diag["total"] = d.total;
  diag["max_imag"] = d.max_imag;
  diag["imag_warning"] = d.imag_warning;
  diag["grid_max_imag"] = grid.max_imag;

  const fs::path dir = o.common.out_dir;
  write_file_atomic(dir / "estimate.csv", estimate_csv(grid.values, rc.text, seed));
  write_file_atomic(dir / "coefficients.csv", coefficients_csv(res.estimate.coefficients, rc.text, seed));
  write_file_atomic(dir / "wavelets.csv", wavelet_csv(res.kept, rc.text, seed));
  write_file_atomic(dir / "diagnostics.json", diag.dump(2) + "\n");
  out << "levels j0=" << d.levels.j0 << " j1=" << d.levels.j1 << (d.levels.extended ? " (extended)" : "")
      << ", kept";
  for (long k : d.kept) out << ' ' << k;
  out << "\n";
  return kExitOk;
}

int cmd_linear(const Options& o, std::ostream& out) {
  auto [rc, file] = load_data(o);
  const auto g = rc.shift();
  long M = 0;
  if (o.M) {
    M = *o.M;
  } else {
    const auto est = rc.estimator();
    const auto* lin = std::get_if<LinearCutoff>(&est);
    if (!lin) throw ConfigError("linear-estimate needs --M or a linear estimator in the config");
    M = linear_cutoff_for(*lin, file.data.size(), g);
  }
  if (M < 0) throw ConfigError("--M must be >= 0");
  const std::uint64_t seed = o.common.seed.value_or(file.seed);
  const auto est = linear_estimate(file.data, g, M);
  check_grid(o.common.grid, M);
  const fs::path dir = o.common.out_dir;
  write_file_atomic(dir / "linear_estimate.csv", estimate_csv(est.on_grid(o.common.grid).values, rc.text, seed));
  write_file_atomic(dir / "linear_coefficients.csv", coefficients_csv(est.coefficients, rc.text, seed));
  out << "linear estimate with M=" << M << "\n";
  return kExitOk;
}

Design load_design(const RunConfig& rc) { return Design{rc.intensity(), rc.shift(), rc.estimator()}; }

void print_rows(const RiskReport& rep, std::ostream& out) {
  out << std::setw(8) << "n" << std::setw(8) << "R" << std::setw(16) << "mise" << std::setw(14)
      << "stderr" << std::setw(16) << "exact" << "\n";
  for (const auto& r : rep.rows) {
    out << std::setw(8) << r.n << std::setw(8) << r.R << std::setw(16) << r.mean << std::setw(14)
        << r.stderr_;
    if (r.exact) out << std::setw(16) << *r.exact;
    out << "\n";
  }
}

void write_report(const RiskReport& rep, const fs::path& stem, const std::string& json_text) {
  write_file_atomic(fs::path(stem.string() + ".json"), json_text);
  write_file_atomic(fs::path(stem.string() + ".csv"), rep.to_csv());
  write_file_atomic(fs::path(stem.string() + ".dat"), rep.to_gnuplot());
}

int cmd_risk_bench(const Options& o, std::ostream& out) {
  const RunConfig rc = load_config(o.common);
  const Design design = load_design(rc);
  const std::uint64_t seed = seed_of(o.common, rc);
  RiskReport rep = risk_ladder(design, rc.ns(), rc.replications(200), seed, {workers_of(o.common), {}});
  rep.design = rc.text;
  print_rows(rep, out);
  bool all_within = true;
  for (const auto& r : rep.rows)
    if (r.exact && std::abs(r.mean - *r.exact) > 3.0 * r.stderr_) all_within = false;
  write_report(rep, fs::path(o.common.out_dir) / "risk", rep.to_json());
  if (std::any_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.exact.has_value(); }))
    out << (all_within ? "exact risk within 3 stderr in every row\n"
                       : "exact risk outside 3 stderr in some row\n");
  return kExitOk;
}

int cmd_rate_check(const Options& o, std::ostream& out) {
  const RunConfig rc = load_config(o.common);
  const Design design = load_design(rc);
  const std::uint64_t seed = seed_of(o.common, rc);
  const bool monte_carlo = rc.raw.value("monte_carlo", true);
  const auto ns = rc.ns();
  RiskReport rep;
  rep.design = rc.text;
  rep.seed = seed;
  const auto* lin = std::get_if<LinearCutoff>(&design.estimator);
  if (monte_carlo) {
    rep = risk_ladder(design, ns, rc.replications(50), seed, {workers_of(o.common), {}});
    rep.design = rc.text;
  } else {
    if (!lin) throw ConfigError("rate-check without Monte Carlo needs a linear estimator");
    for (std::size_t n : ns) {
      RiskCell c{n, 0, linear_exact_risk(*lin, design.truth, design.shift, n), 0.0, {}};
      c.exact = c.mean;
      rep.rows.push_back(c);
    }
    if (rep.rows.size() >= 3) rep.fit = rate_fit(rep.rows);
  }
  std::optional<double> s;
  if (rc.raw.contains("s")) s = rc.raw.at("s").get<double>();
  else s = nominal_smoothness(design.truth);
  if (s) rep.theoretical_slope = -theoretical_exponent(*s, design.shift.ill_posedness());

  Json j = Json::parse(rep.to_json());
  if (lin && monte_carlo && rep.rows.size() >= 3) {
    std::vector<RiskCell> exact_rows;
    for (const auto& r : rep.rows) exact_rows.push_back({r.n, r.R, *r.exact, 0.0, {}});
    j["exact_fitted_slope"] = rate_fit(exact_rows).slope;
  }
  print_rows(rep, out);
  if (rep.fit) out << "fitted slope " << rep.fit->slope << " (vs ln(n/ln n): " << rep.fit->slope_log_adjusted << ")\n";
  if (rep.theoretical_slope) out << "theoretical slope " << *rep.theoretical_slope << "\n";
  write_report(rep, fs::path(o.common.out_dir) / "rate", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_lower_bound(const Options& o, std::ostream& out) {
  LowerBoundDemoSpec spec = o.demo;
  spec.seed = o.common.seed.value_or(0);
  spec.workers = workers_of(o.common);
  Json cfg{{"D", spec.D}, {"s", spec.s}, {"nu", spec.nu}, {"n", spec.n}, {"R", spec.R},
           {"A", spec.A}, {"sigma", spec.sigma}, {"hypotheses", spec.hypotheses}};
  const auto rows = lower_bound_demo(spec);
  std::ostringstream os;
  os << config_comment(cfg.dump(), spec.seed) << "hypothesis,omega,mise_mean,mise_stderr\n";
  double worst = 0.0;
  for (const auto& r : rows) {
    std::string bits;
    for (auto b : r.omega) bits += static_cast<char>('0' + b);
    os << r.index << ',' << bits << ',' << format_double(r.mean) << ',' << format_double(r.stderr_) << "\n";
    worst = std::max(worst, r.mean);
  }
  const fs::path path = fs::path(o.common.out_dir) / "lower_bound.csv";
  write_file_atomic(path, os.str());
  out << rows.size() << " hypotheses, largest mean MISE " << worst << "\nwrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_selftest(const Options& o, std::ostream& out) {
  const auto results = run_invariants(workers_of(o.common));
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool ok = true;
  for (const auto& r : results) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << r.name << (r.passed ? "PASS" : "FAIL");
    if (!r.passed) out << "  " << r.detail;
    out << "\n";
    ok = ok && r.passed;
  }
  out << (ok ? "all checks passed\n" : "some checks failed\n");
  return ok ? kExitOk : kExitFailure;
}

void add_common(CLI::App* sub, Common& c, bool with_config = true) {
  if (with_config) sub->add_option("--config", c.config_path, "JSON config file");
  sub->add_option("--seed", c.seed, "root seed");
  sub->add_option("--out", c.out_dir, "output directory");
  sub->add_option("--workers", c.workers, "worker threads (0: SHIFTPOIS_WORKERS or hardware)");
  sub->add_option("--grid", c.grid, "evaluation grid size (power of two)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intensity estimation from randomly shifted Poisson processes", "shiftpois"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "draw a trajectory set");
  add_common(sim, o.common);
  sim->add_flag("--keep-shifts", o.keep_shifts, "write latent shifts");

  auto* est = app.add_subcommand("estimate", "adaptive wavelet estimate of a trajectory set");
  add_common(est, o.common);
  est->add_option("--data", o.data_path, "trajectories (JSON lines)");
  est->add_option("--gamma", o.gamma, "concentration level (>= 2)");
  est->add_option("--delta", o.delta, "threshold offset (> 0)");
  est->add_flag("--clip", o.clip, "clip negative grid values");
  est->add_option("--levels", o.levels, "strict | extend");

  auto* lin = app.add_subcommand("linear-estimate", "spectral cut-off estimate");
  add_common(lin, o.common);
  lin->add_option("--data", o.data_path, "trajectories (JSON lines)");
  lin->add_option("--M", o.M, "cutoff frequency");

  auto* risk = app.add_subcommand("risk-bench", "Monte Carlo risk table");
  add_common(risk, o.common);
  auto* rate = app.add_subcommand("rate-check", "risk ladder and rate fit");
  add_common(rate, o.common);

  auto* demo = app.add_subcommand("lower-bound-demo", "risks over wavelet-bump hypotheses");
  add_common(demo, o.common, false);
  demo->add_option("--D", o.demo.D, "level (<= 4)");
  demo->add_option("--s", o.demo.s, "smoothness");
  demo->add_option("--nu", o.demo.nu, "ill-posedness of the shift law");
  demo->add_option("--n", o.demo.n, "trajectories per dataset");
  demo->add_option("--R", o.demo.R, "replications per hypothesis");
  demo->add_option("--A", o.demo.A, "Besov radius");
  demo->add_option("--sigma", o.demo.sigma, "shift scale");
  demo->add_option("--hypotheses", o.demo.hypotheses, "hypotheses to sample");

  auto* self = app.add_subcommand("selftest", "run the invariant suite");
  add_common(self, o.common, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(o, out);
    if (*est) return cmd_estimate(o, out);
    if (*lin) return cmd_linear(o, out);
    if (*risk) return cmd_risk_bench(o, out);
    if (*rate) return cmd_rate_check(o, out);
    if (*demo) return cmd_lower_bound(o, out);
    if (*self) return cmd_selftest(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ScheduleError& e) {
    err << "schedule error: " << e.what() << "\n";
    return kExitSchedule;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace shiftpois::cli
