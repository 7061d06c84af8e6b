// Monte Carlo risk, exact-vs-empirical comparisons and rate fits.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftpois/model.hpp"
#include "shiftpois/spectral.hpp"
#include "shiftpois/threshold.hpp"

namespace shiftpois {

/// Spectral cut-off. With no fixed M the cutoff comes from choose_cutoff(n, s, nu).
struct LinearCutoff {
  std::optional<long> M;
  double s = 1.0;
};

struct Adaptive {
  ThresholdParams params;
};

/// lambda_hat = y_0, the mean count.
struct EmpiricalConstant {};

using EstimatorSpec = std::variant<LinearCutoff, Adaptive, EmpiricalConstant>;

struct Design {
  IntensityModel truth;
  ShiftDensity shift;
  EstimatorSpec estimator;
};

std::string describe(const EstimatorSpec& spec);

/// sum_{|l| <= L} |theta_hat_l - theta_l|^2 + tail of the truth beyond L.
double mise(const FourierTable& estimate, const IntensityModel& truth);
/// Fourier MISE when unclipped; clipped estimates go through a 2^14 grid.
double mise(const IntensityEstimate& estimate, const IntensityModel& truth);

/// Applies the estimator of a design to one dataset.
IntensityEstimate run_estimator(const EstimatorSpec& spec, const TrajectorySet& data,
                                const ShiftDensity& g);

/// Fixed M, or choose_cutoff(n, s, nu).
long linear_cutoff_for(const LinearCutoff& spec, std::size_t n, const ShiftDensity& g);
double linear_exact_risk(const LinearCutoff& spec, const IntensityModel& truth,
                         const ShiftDensity& g, std::size_t n);

struct RiskCell {
  std::size_t n = 0;
  std::size_t R = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::optional<double> exact;  // closed-form risk for linear designs
};

struct McOptions {
  unsigned workers = 1;
  /// Every replication uses this stream id instead of 0..R-1.
  std::optional<std::uint64_t> pinned_stream;
};

/// Mean and standard error of the MISE over replications with stream ids 0..R-1.
RiskCell monte_carlo_risk(const Design& design, std::size_t n, std::size_t R,
                          std::uint64_t root_seed, const McOptions& opts = {});

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_log_adjusted = 0.0;  // against ln(n / ln n)
  double intercept_log_adjusted = 0.0;
};

/// Least squares of ln(mean MISE) against ln n (and ln(n / ln n)).
RateFit rate_fit(const std::vector<RiskCell>& rows);

/// 2s / (2s + 2nu + 1).
double theoretical_exponent(double s, double nu);

struct RiskReport {
  std::string design;  // JSON text of the design config
  std::vector<RiskCell> rows;
  std::optional<RateFit> fit;
  std::optional<double> theoretical_slope;
  std::uint64_t seed = 0;

  std::string to_json() const;
  std::string to_csv() const;
  /// Two columns: n and mean MISE.
  std::string to_gnuplot() const;
};

/// One Monte Carlo cell per n, rows sorted by n; fit when >= 3 rows.
RiskReport risk_ladder(const Design& design, std::vector<std::size_t> ns, std::size_t R,
                       std::uint64_t root_seed, const McOptions& opts = {});

}  // namespace shiftpois
