// Empirical Fourier coefficients, deconvolution and the spectral cut-off estimator.
#pragma once

#include <cstddef>
#include <vector>

#include "shiftpois/fourier.hpp"
#include "shiftpois/model.hpp"
#include "shiftpois/simulate.hpp"

namespace shiftpois {

/// y_l = (1/n) sum_i sum_{T in N^i} exp(-2 pi i l T) for |l| <= L.
struct FourierStats {
  FourierTable y;
  std::size_t n = 0;
  long max_freq() const noexcept { return y.max_freq(); }
  /// y_0, the mean count.
  double mean_count() const noexcept { return y[0].real(); }
};

/// delta_l in [0, 1] for |l| <= support(); zero beyond.
class Filter {
public:
  /// 1 on |l| <= M.
  static Filter cutoff(long M);
  /// delta_l for l = -L..L (size 2L + 1).
  static Filter from_values(std::vector<double> values);

  long support() const noexcept { return max_freq_; }
  double operator[](long l) const noexcept;

private:
  long max_freq_ = -1;
  std::vector<double> d_;
};

/// An estimate held as a Fourier table; grid values are synthesized on demand.
struct IntensityEstimate {
  FourierTable coefficients;
  bool clip_negative = false;

  /// Values at k / G. Clipping (if on) applies only to grid values.
  GridValues on_grid(std::size_t grid) const;
};

FourierStats empirical_fourier(const TrajectorySet& data, long L);

/// (1/n) sum_i exp(-2 pi i l tau_i).
cplx empirical_char(const std::vector<double>& shifts, long l);
/// Throws DataError("latent shifts unavailable") when shifts were not kept.
cplx empirical_char(const TrajectorySet& data, long l);

/// theta_hat_l = delta_l y_l / gamma_l on the filter support.
FourierTable deconvolve(const FourierStats& stats, const ShiftSpectrum& gamma,
                        const Filter& filter);
FourierTable deconvolve(const FourierStats& stats, const ShiftDensity& g,
                        const Filter& filter);

IntensityEstimate linear_estimate(const TrajectorySet& data, const ShiftDensity& g, long M);

/// Bias, Poisson variance and shift variance terms plus the bias tail
/// sum_{|l| > support} |theta_l|^2.
double linear_risk_exact(const IntensityModel& lambda, const ShiftSpectrum& gamma,
                         const Filter& filter, std::size_t n);
double linear_risk_exact(const IntensityModel& lambda, const ShiftDensity& g,
                         const Filter& filter, std::size_t n);

/// Largest M with M <= n^{1/(2s + 2nu + 1)}.
long choose_cutoff(std::size_t n, double s, double nu);

}  // namespace shiftpois
