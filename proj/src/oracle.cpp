#include "shiftpois/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shiftpois/bench.hpp"
#include "shiftpois/errors.hpp"
#include "shiftpois/meyer.hpp"
#include "shiftpois/rng.hpp"
#include "shiftpois/threshold.hpp"

namespace shiftpois {

namespace {

MeanEstimate summarize(const std::vector<double>& v) {
  MeanEstimate m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  if (v.size() > 1)
    m.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return m;
}

}  // namespace

double AssouadSpec::xi() const noexcept {
  return c * std::pow(2.0, -static_cast<double>(D) * (s + 0.5));
}

double AssouadSpec::m() const noexcept { return std::pow(2.0, D / 2.0) * xi(); }

void AssouadSpec::validate() const {
  if (D < 0) throw ConfigError("Assouad level D must be >= 0");
  if (omega.size() != (std::size_t{1} << D)) throw ConfigError("omega must have 2^D bits");
  if (!(s > 0.0) || !(A > 0.0) || !(c_psi > 0.0)) throw ConfigError("Assouad spec needs s, A, c_psi > 0");
  if (!(c > 0.0) || c > A / (2.0 + c_psi) * (1.0 + 1e-15))
    throw ConfigError("Assouad spec needs 0 < c <= A / (2 + c_psi)");
}

double default_c_psi() {
  static const double v = 1.1 * meyer::sup_bound_constant(kCpsiLevel, kCpsiTrials, kCpsiSeed);
  return v;
}

AssouadSpec make_assouad_spec(int D, std::vector<std::uint8_t> omega, double s, double A) {
  AssouadSpec spec;
  spec.D = D;
  spec.omega = std::move(omega);
  spec.s = s;
  spec.A = A;
  spec.c_psi = default_c_psi();
  spec.c = A / (2.0 + spec.c_psi);
  return spec;
}

IntensityModel assouad_intensity(const AssouadSpec& spec) {
  spec.validate();
  WaveletBump wb;
  wb.D = spec.D;
  wb.omega = spec.omega;
  wb.s = spec.s;
  wb.c = spec.c;
  wb.A = spec.A;
  wb.c_psi = spec.c_psi;
  wb.rho = spec.A / 2.0;
  IntensityModel lambda = IntensityModel::wavelet_bump(std::move(wb));
  std::size_t grid = std::size_t{1} << (spec.D + 8);
  while (static_cast<long>(grid) < 2 * *lambda.band_limit()) grid <<= 1;
  const auto v = lambda.eval_on_grid(grid);
  const double lo = *std::min_element(v.begin(), v.end());
  if (lo < -1e-12) throw ConfigError("Assouad intensity is negative; c_psi too small");
  return lambda;
}

double girsanov_log_ratio(const std::vector<double>& events, double rho,
                          const IntensityModel& mu, double tau) {
  if (!(rho > 0.0)) throw ConfigError("girsanov_log_ratio needs rho > 0");
  double acc = -mu.total_mass();
  for (double t : events) acc += std::log1p(mu.value(t - tau) / rho);
  return acc;
}

double girsanov_log_ratio(const TrajectorySet& data, double rho, const IntensityModel& mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += girsanov_log_ratio(data.trajectories[i], rho, mu, data.shifts ? (*data.shifts)[i] : 0.0);
  return acc;
}

ChangeOfMeasure change_of_measure_check(const PathFunctional& F, double rho,
                                        const IntensityModel& mu, std::size_t R,
                                        std::uint64_t seed, unsigned workers) {
  if (R < 2) throw ConfigError("change_of_measure_check needs R >= 2");
  if (!(rho > 0.0)) throw ConfigError("change_of_measure_check needs rho > 0");
  const IntensitySampler h1(mu.with_offset(rho));
  const IntensitySampler h0(IntensityModel::cosine(rho, 0.0));
  std::vector<double> lhs(R), rhs(R);
  parallel_for(R, workers, [&](std::size_t r) {
    Rng r1 = Rng::keyed({seed, r}, 0, StreamPurpose::events);
    lhs[r] = F(h1.draw(0.0, r1));
    Rng r0 = Rng::keyed({seed, r}, 1, StreamPurpose::aux);
    const auto path = h0.draw(0.0, r0);
    rhs[r] = F(path) * std::exp(girsanov_log_ratio(path, rho, mu));
  });
  return {summarize(lhs), summarize(rhs)};
}

MeanEstimate likelihood_ratio_mean(double rho, const IntensityModel& mu, std::size_t R,
                                   std::uint64_t seed, unsigned workers) {
  if (R < 2) throw ConfigError("likelihood_ratio_mean needs R >= 2");
  const IntensitySampler h0(IntensityModel::cosine(rho, 0.0));
  std::vector<double> v(R);
  parallel_for(R, workers, [&](std::size_t r) {
    Rng rng = Rng::keyed({seed, r}, 1, StreamPurpose::aux);
    v[r] = std::exp(girsanov_log_ratio(h0.draw(0.0, rng), rho, mu));
  });
  return summarize(v);
}

std::vector<AssouadSchedulePoint> assouad_schedule(const std::vector<std::size_t>& ns,
                                                   double s, double nu, double c) {
  std::vector<AssouadSchedulePoint> out;
  for (std::size_t n : ns) {
    AssouadSchedulePoint p;
    p.n = n;
    p.D = std::log2(static_cast<double>(n)) / (2.0 * s + 2.0 * nu + 1.0);
    const double xi = c * std::pow(2.0, -p.D * (s + 0.5));
    p.m = std::pow(2.0, p.D / 2.0) * xi;
    p.n_m3 = static_cast<double>(n) * p.m * p.m * p.m;
    out.push_back(p);
  }
  return out;
}

std::vector<HypothesisRisk> lower_bound_demo(const LowerBoundDemoSpec& spec) {
  if (spec.D < 0 || spec.D > 4) throw ConfigError("lower-bound demo needs 0 <= D <= 4");
  if (spec.R < 2) throw ConfigError("lower-bound demo needs R >= 2");
  const std::size_t bits = std::size_t{1} << spec.D;
  const ShiftDensity g = spec.nu == 2.0 ? ShiftDensity::laplace(spec.sigma)
                                        : ShiftDensity::sym_gamma(spec.nu, spec.sigma);
  Adaptive est;
  est.params.schedule = LevelSchedule::extend_finest;

  // Vertex list: all of them when few, otherwise seeded random picks.
  std::vector<std::vector<std::uint8_t>> vertices;
  const bool enumerate = bits < 6 && (std::size_t{1} << bits) <= spec.hypotheses;
  const std::size_t count = enumerate ? (std::size_t{1} << bits) : spec.hypotheses;
  for (std::size_t h = 0; h < count; ++h) {
    std::vector<std::uint8_t> omega(bits);
    if (enumerate) {
      for (std::size_t k = 0; k < bits; ++k) omega[k] = static_cast<std::uint8_t>((h >> k) & 1U);
    } else {
      Rng rng = Rng::keyed({spec.seed, h}, 0, StreamPurpose::signs);
      for (auto& b : omega) b = static_cast<std::uint8_t>(rng() >> 63);
    }
    vertices.push_back(std::move(omega));
  }

  std::vector<HypothesisRisk> out;
  for (std::size_t h = 0; h < vertices.size(); ++h) {
    const auto lambda = assouad_intensity(make_assouad_spec(spec.D, vertices[h], spec.s, spec.A));
    const Design design{lambda, g, est};
    const auto cell = monte_carlo_risk(design, spec.n, spec.R, spec.seed + 1 + h, {spec.workers, {}});
    out.push_back({h, vertices[h], cell.mean, cell.stderr_});
  }
  return out;
}

}  // namespace shiftpois
