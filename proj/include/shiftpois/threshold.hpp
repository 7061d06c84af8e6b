// Data-driven thresholds, level schedule and the hard-thresholding estimator.
#pragma once

#include <cstddef>
#include <vector>

#include "shiftpois/meyer.hpp"
#include "shiftpois/model.hpp"
#include "shiftpois/simulate.hpp"
#include "shiftpois/spectral.hpp"

namespace shiftpois {

/// strict: j0 > j1 is an error. extend_finest: j1 is raised to j0 so the
/// estimator keeps one detail level.
enum class LevelSchedule { strict, extend_finest };

struct ThresholdParams {
  double gamma = 2.0;
  double delta = 1.0;
  bool clip_negative = false;
  LevelSchedule schedule = LevelSchedule::strict;

  void validate() const;
};

struct Levels {
  int j0 = 0;
  int j1 = 0;
  bool extended = false;  // j1 was raised to j0
};

/// sigma_j^2 = 2^{-j} sum_{l in Omega_j} |gamma_l|^{-2}.
double sigma2(int j, const ShiftSpectrum& gamma);
double sigma2(int j, const ShiftDensity& g);
/// eps_j = 2^{-j/2} sum_{l in Omega_j} |gamma_l|^{-1}.
double epsilon(int j, const ShiftSpectrum& gamma);
double epsilon(int j, const ShiftDensity& g);

/// K_n(gamma) from the total count over n >= 2 trajectories.
double k_tilde(long total_count, std::size_t n, double gamma);
double k_tilde(const std::vector<long>& counts, double gamma);

/// 4 (sqrt(sigma_j^2 (2 gamma ln n / n)(||g||_inf K + delta)) + gamma ln n / (3n) eps_j).
double random_threshold(int j, std::size_t n, const ThresholdParams& params,
                        const ShiftDensity& g, double k_tilde_value);
double random_threshold(int j, std::size_t n, const ThresholdParams& params,
                        const ShiftSpectrum& gamma, double sup_norm, double k_tilde_value);

/// j0: largest j with 2^j <= ln n. j1: largest j with 2^{j(2nu+1)} <= n / ln n.
/// Throws ScheduleError when n < 8 or (strict) j0 > j1.
Levels resolution_levels(std::size_t n, double nu,
                         LevelSchedule schedule = LevelSchedule::strict);

struct AdaptiveDiagnostics {
  Levels levels;
  double k_tilde = 0.0;
  std::vector<double> thresholds;  // per level j0..j1
  std::vector<long> kept;          // surviving details per level
  std::vector<long> total;         // 2^j per level
  double max_imag = 0.0;
  bool imag_warning = false;
};

struct AdaptiveResult {
  IntensityEstimate estimate;
  meyer::WaveletCoefficients raw;   // before thresholding
  meyer::WaveletCoefficients kept;  // after thresholding
  AdaptiveDiagnostics diagnostics;
};

/// Zeroes details with |beta| < thresholds[j - j0]; ties are kept.
/// Returns the surviving count per level.
std::vector<long> apply_hard_threshold(meyer::WaveletCoefficients& coeffs,
                                       const std::vector<double>& thresholds);

/// Unfiltered deconvolution, Meyer analysis, keep |beta| >= s_j, synthesis.
AdaptiveResult adaptive_estimate(const TrajectorySet& data, const ShiftDensity& g,
                                 const ThresholdParams& params);

}  // namespace shiftpois
