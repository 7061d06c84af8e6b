#include "shiftpois/bench.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "shiftpois/errors.hpp"
#include "shiftpois/io.hpp"
#include "shiftpois/simulate.hpp"

namespace shiftpois {

namespace {

constexpr std::size_t kClipGrid = std::size_t{1} << 14;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string describe(const EstimatorSpec& spec) {
  return std::visit(
      overloaded{[](const LinearCutoff& l) {
                   return l.M ? "linear(M=" + std::to_string(*l.M) + ")"
                              : "linear(auto, s=" + format_double(l.s) + ")";
                 },
                 [](const Adaptive& a) {
                   return "adaptive(gamma=" + format_double(a.params.gamma) +
                          ", delta=" + format_double(a.params.delta) + ")";
                 },
                 [](const EmpiricalConstant&) { return std::string("empirical_constant"); }},
      spec);
}

double mise(const FourierTable& estimate, const IntensityModel& truth) {
  const long L = std::max(estimate.max_freq(), 0L);
  double acc = 0.0;
  for (long l = -L; l <= L; ++l) acc += std::norm(estimate[l] - truth.theta(l));
  return acc + truth.tail_energy(L);
}

double mise(const IntensityEstimate& estimate, const IntensityModel& truth) {
  if (!estimate.clip_negative) return mise(estimate.coefficients, truth);
  const std::size_t grid =
      std::max(kClipGrid, std::size_t{4} * static_cast<std::size_t>(
                                               std::max(estimate.coefficients.max_freq(), 1L)));
  std::size_t g = 1;
  while (g < grid) g <<= 1;
  const auto est = estimate.on_grid(g).values;
  const auto tru = truth.eval_on_grid(g);
  double acc = 0.0;
  for (std::size_t k = 0; k < g; ++k) acc += (est[k] - tru[k]) * (est[k] - tru[k]);
  return acc / static_cast<double>(g);
}

IntensityEstimate run_estimator(const EstimatorSpec& spec, const TrajectorySet& data,
                                const ShiftDensity& g) {
  return std::visit(
      overloaded{[&](const LinearCutoff& l) {
                   return linear_estimate(data, g, linear_cutoff_for(l, data.size(), g));
                 },
                 [&](const Adaptive& a) { return adaptive_estimate(data, g, a.params).estimate; },
                 [&](const EmpiricalConstant&) {
                   const auto st = empirical_fourier(data, 0);
                   FourierTable t(0);
                   t.at(0) = st.mean_count();
                   return IntensityEstimate{t, false};
                 }},
      spec);
}

long linear_cutoff_for(const LinearCutoff& spec, std::size_t n, const ShiftDensity& g) {
  return spec.M ? *spec.M : choose_cutoff(n, spec.s, g.ill_posedness());
}

double linear_exact_risk(const LinearCutoff& spec, const IntensityModel& truth,
                         const ShiftDensity& g, std::size_t n) {
  return linear_risk_exact(truth, g, Filter::cutoff(linear_cutoff_for(spec, n, g)), n);
}

RiskCell monte_carlo_risk(const Design& design, std::size_t n, std::size_t R,
                          std::uint64_t root_seed, const McOptions& opts) {
  if (R < 2) throw ConfigError("monte_carlo_risk needs R >= 2");
  if (n < 1) throw ConfigError("monte_carlo_risk needs n >= 1");
  const IntensitySampler sampler(design.truth);
  std::vector<double> losses(R);
  parallel_for(R, opts.workers, [&](std::size_t r) {
    const SimSeed seed{root_seed, opts.pinned_stream ? *opts.pinned_stream : r};
    try {
      const auto data = sample_dataset(sampler, design.shift, n, seed, false);
      losses[r] = mise(run_estimator(design.estimator, data, design.shift), design.truth);
    } catch (const ScheduleError& e) {
      throw ScheduleError("replication " + std::to_string(seed.stream_id) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("replication " + std::to_string(seed.stream_id) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(seed.stream_id) + ": " + e.what());
    }
  });
  // Fixed-order reduction keeps the result independent of the worker count.
  double sum = 0.0;
  for (double v : losses) sum += v;
  const double mean = sum / static_cast<double>(R);
  double ss = 0.0;
  for (double v : losses) ss += (v - mean) * (v - mean);
  RiskCell cell;
  cell.n = n;
  cell.R = R;
  cell.mean = mean;
  cell.stderr_ = std::sqrt(ss / static_cast<double>(R - 1)) / std::sqrt(static_cast<double>(R));
  if (const auto* lin = std::get_if<LinearCutoff>(&design.estimator))
    cell.exact = linear_exact_risk(*lin, design.truth, design.shift, n);
  return cell;
}

RateFit rate_fit(const std::vector<RiskCell>& rows) {
  if (rows.size() < 3) throw ConfigError("rate_fit needs at least 3 rows");
  if (std::all_of(rows.begin(), rows.end(), [&](const RiskCell& r) { return r.n == rows[0].n; }))
    throw DataError("rate_fit needs at least two distinct n");
  const auto fit = [&](auto xfun, double& slope, double& intercept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(rows.size());
    for (const auto& r : rows) {
      if (!(r.mean > 0.0)) throw DataError("rate_fit needs positive mean MISE");
      const double x = xfun(static_cast<double>(r.n));
      const double y = std::log(r.mean);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double den = m * sxx - sx * sx;
    slope = (m * sxy - sx * sy) / den;
    intercept = (sy - slope * sx) / m;
  };
  RateFit out;
  fit([](double n) { return std::log(n); }, out.slope, out.intercept);
  for (const auto& r : rows)
    if (r.n < 3) throw DataError("rate_fit on ln(n / ln n) needs n >= 3");
  fit([](double n) { return std::log(n / std::log(n)); }, out.slope_log_adjusted,
      out.intercept_log_adjusted);
  return out;
}

double theoretical_exponent(double s, double nu) {
  if (!(s > 0.0) || !(nu >= 0.0)) throw ConfigError("theoretical_exponent needs s > 0, nu >= 0");
  return 2.0 * s / (2.0 * s + 2.0 * nu + 1.0);
}

std::string RiskReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = design.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json::parse(design);
  j["seed"] = seed;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row{{"n", r.n}, {"R", r.R}, {"mise_mean", r.mean},
                               {"mise_stderr", r.stderr_}};
    if (r.exact) {
      row["exact"] = *r.exact;
      row["z"] = r.stderr_ > 0.0 ? (r.mean - *r.exact) / r.stderr_ : 0.0;
    }
    rows_json.push_back(row);
  }
  j["rows"] = rows_json;
  if (fit) {
    j["fitted_slope"] = fit->slope;
    j["fitted_intercept"] = fit->intercept;
    j["fitted_slope_log_adjusted"] = fit->slope_log_adjusted;
  }
  if (theoretical_slope) j["theoretical_slope"] = *theoretical_slope;
  return j.dump(2) + "\n";
}

std::string RiskReport::to_csv() const {
  std::ostringstream os;
  os << config_comment(design, seed);
  const bool any_exact = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.exact.has_value(); });
  os << "n,R,mise_mean,mise_stderr" << (any_exact ? ",exact" : "") << "\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.R << ',' << format_double(r.mean) << ',' << format_double(r.stderr_);
    if (any_exact) os << ',' << (r.exact ? format_double(*r.exact) : "");
    os << "\n";
  }
  return os.str();
}

std::string RiskReport::to_gnuplot() const {
  std::ostringstream os;
  os << config_comment(design, seed);
  for (const auto& r : rows) os << r.n << ' ' << format_double(r.mean) << "\n";
  return os.str();
}

RiskReport risk_ladder(const Design& design, std::vector<std::size_t> ns, std::size_t R,
                       std::uint64_t root_seed, const McOptions& opts) {
  std::sort(ns.begin(), ns.end());
  RiskReport rep;
  rep.seed = root_seed;
  for (std::size_t n : ns) rep.rows.push_back(monte_carlo_risk(design, n, R, root_seed, opts));
  if (rep.rows.size() >= 3) rep.fit = rate_fit(rep.rows);
  return rep;
}

}  // namespace shiftpois
