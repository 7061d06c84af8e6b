#include "shiftpois/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shiftpois/errors.hpp"

namespace shiftpois {

void ThresholdParams::validate() const {
  if (!(gamma >= 2.0) || !std::isfinite(gamma)) throw ConfigError("threshold gamma must be >= 2");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("threshold delta must be > 0");
}

double sigma2(int j, const ShiftSpectrum& gamma) {
  if (j < 0) throw ConfigError("level j must be >= 0");
  double acc = 0.0;
  for (long l = meyer::omega_min(j); l <= meyer::omega_max(j); ++l) {
    const double g = gamma(l);
    acc += 2.0 / (g * g);
  }
  return std::ldexp(acc, -j);
}

double sigma2(int j, const ShiftDensity& g) { return sigma2(j, g.spectrum()); }

double epsilon(int j, const ShiftSpectrum& gamma) {
  if (j < 0) throw ConfigError("level j must be >= 0");
  double acc = 0.0;
  for (long l = meyer::omega_min(j); l <= meyer::omega_max(j); ++l)
    acc += 2.0 / std::abs(gamma(l));
  return acc * std::pow(2.0, -0.5 * j);
}

double epsilon(int j, const ShiftDensity& g) { return epsilon(j, g.spectrum()); }

double k_tilde(long total_count, std::size_t n, double gamma) {
  if (n < 2) throw ConfigError("k_tilde needs n >= 2");
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double sum = static_cast<double>(total_count);
  return sum / nn + 4.0 * gamma * ln / (3.0 * nn) +
         std::sqrt(2.0 * gamma * ln / (nn * nn) * sum +
                   5.0 * gamma * gamma * ln * ln / (3.0 * nn * nn));
}

double k_tilde(const std::vector<long>& counts, double gamma) {
  long total = 0;
  for (long k : counts) total += k;
  return k_tilde(total, counts.size(), gamma);
}

double random_threshold(int j, std::size_t n, const ThresholdParams& params,
                        const ShiftSpectrum& gamma, double sup_norm, double k_tilde_value) {
  if (n < 2) throw ConfigError("random_threshold needs n >= 2");
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double radical = std::sqrt(sigma2(j, gamma) * (2.0 * params.gamma * ln / nn) *
                                   (sup_norm * k_tilde_value + params.delta));
  return 4.0 * (radical + params.gamma * ln / (3.0 * nn) * epsilon(j, gamma));
}

double random_threshold(int j, std::size_t n, const ThresholdParams& params,
                        const ShiftDensity& g, double k_tilde_value) {
  return random_threshold(j, n, params, g.spectrum(), g.sup_norm(), k_tilde_value);
}

Levels resolution_levels(std::size_t n, double nu, LevelSchedule schedule) {
  if (!(nu > 0.0)) throw ConfigError("resolution_levels needs nu > 0");
  if (n < 8) throw ScheduleError("sample too small for level schedule (n < 8)");
  const double ln = std::log(static_cast<double>(n));
  Levels lv;
  lv.j0 = 0;
  while (std::ldexp(1.0, lv.j0 + 1) <= ln) ++lv.j0;
  // 2^{j(2nu+1)} <= n / ln n, compared on the log scale.
  const double budget = std::log(static_cast<double>(n) / ln);
  const double step = (2.0 * nu + 1.0) * std::numbers::ln2;
  lv.j1 = 0;
  while ((lv.j1 + 1) * step <= budget * (1.0 + 1e-14)) ++lv.j1;
  if (lv.j0 > lv.j1) {
    if (schedule == LevelSchedule::strict)
      throw ScheduleError("sample too small for level schedule (j0 = " + std::to_string(lv.j0) +
                          " > j1 = " + std::to_string(lv.j1) + ")");
    lv.j1 = lv.j0;
    lv.extended = true;
  }
  return lv;
}

std::vector<long> apply_hard_threshold(meyer::WaveletCoefficients& coeffs,
                                       const std::vector<double>& thresholds) {
  if (thresholds.size() != coeffs.detail.size())
    throw std::invalid_argument("one threshold per detail level required");
  std::vector<long> kept;
  for (std::size_t lvl = 0; lvl < coeffs.detail.size(); ++lvl) {
    long count = 0;
    for (auto& beta : coeffs.detail[lvl]) {
      if (std::abs(beta) >= thresholds[lvl]) {
        ++count;
      } else {
        beta = 0.0;
      }
    }
    kept.push_back(count);
  }
  return kept;
}

AdaptiveResult adaptive_estimate(const TrajectorySet& data, const ShiftDensity& g,
                                 const ThresholdParams& params) {
  params.validate();
  const std::size_t n = data.size();
  const Levels lv = resolution_levels(n, g.ill_posedness(), params.schedule);
  const long L = std::max(meyer::scaling_max(lv.j0), meyer::omega_max(lv.j1));

  const FourierStats stats = empirical_fourier(data, L);
  FourierTable theta_hat(L);
  for (long l = -L; l <= L; ++l) theta_hat.at(l) = stats.y[l] / g.gamma(l);

  AdaptiveResult res;
  res.raw = meyer::analyze(theta_hat, lv.j0, lv.j1);
  res.kept = res.raw;
  auto& d = res.diagnostics;
  d.levels = lv;
  d.k_tilde = k_tilde(data.counts(), params.gamma);
  d.max_imag = res.raw.max_imag;
  d.imag_warning = res.raw.imag_warning;
  for (int j = lv.j0; j <= lv.j1; ++j) {
    d.thresholds.push_back(random_threshold(j, n, params, g, d.k_tilde));
    d.total.push_back(1L << j);
  }
  d.kept = apply_hard_threshold(res.kept, d.thresholds);
  res.estimate.coefficients = meyer::synthesize_fourier(res.kept);
  res.estimate.clip_negative = params.clip_negative;
  return res;
}

}  // namespace shiftpois
