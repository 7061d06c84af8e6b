// Periodized Meyer wavelets on [0, 1), handled entirely in the Fourier domain.
//
// Every periodized atom is a finite trigonometric polynomial:
//   c_l(psi_{j,k}) = 2^{-j/2} exp(-2 pi i l k / 2^j) psi_hat(2 pi l / 2^j),
//   c_l(phi_{j,k}) = 2^{-j/2} exp(-2 pi i l k / 2^j) phi_hat(2 pi l / 2^j),
// with psi_hat(w) = exp(-i w / 2) b(|w|) supported on 2pi/3 <= |w| <= 8pi/3 and
// phi_hat supported on |w| <= 4pi/3. Atoms use the orthonormal scaling
// 2^{j/2} psi(2^j t - k).
#pragma once

#include <cstdint>
#include <vector>

#include "shiftpois/fourier.hpp"

namespace shiftpois::meyer {

/// Highest level kept in the shared window cache.
inline constexpr int kMaxCachedLevel = 16;

/// Auxiliary polynomial x^4 (35 - 84x + 70x^2 - 20x^3), clamped to [0, 1].
double aux_poly(double x) noexcept;

/// Real-line Fourier transforms, f_hat(w) = int f(x) exp(-i w x) dx.
cplx psi_hat(double omega) noexcept;
double phi_hat(double omega) noexcept;

/// Omega_j = { l : 2^j / 3 < |l| < 2^{j+2} / 3 }.
long omega_min(int j);
long omega_max(int j);
std::vector<long> omega_set(int j);

/// D_j = { l : |l| < 2^{j+1} / 3 }; returns its largest element.
long scaling_max(int j);

cplx wavelet_fourier_coeff(int j, long k, long l);
cplx scaling_fourier_coeff(int j, long k, long l);

/// Cached psi_hat(2 pi l / 2^j) and phi_hat(2 pi l / 2^j) for l >= 0, one
/// table per level. Built eagerly and immutable afterwards.
class MeyerBasis {
public:
  explicit MeyerBasis(int max_level);

  /// Process-wide basis up to kMaxCachedLevel.
  static const MeyerBasis& shared();

  int max_level() const noexcept { return max_level_; }

  /// psi_hat(2 pi l / 2^j) for any integer l (zero off Omega_j).
  cplx psi_window(int j, long l) const;
  /// phi_hat(2 pi l / 2^j) for any integer l (zero off D_j).
  double phi_window(int j, long l) const;

private:
  void check_level(int j) const;

  int max_level_;
  std::vector<std::vector<cplx>> psi_;    // index l - omega_min(j)
  std::vector<std::vector<double>> phi_;  // index l, 0..scaling_max(j)
};

/// Scaling coefficients at level j0 and details for j0 <= j <= j1.
struct WaveletCoefficients {
  int j0 = 0;
  int j1 = -1;
  std::vector<double> scaling;              // 2^j0 entries
  std::vector<std::vector<double>> detail;  // detail[j - j0] has 2^j entries
  double max_imag = 0.0;  // largest imaginary part dropped during analysis
  bool imag_warning = false;

  static WaveletCoefficients zeros(int j0, int j1);

  double detail_at(int j, long k) const;
  double& detail_at(int j, long k);
  /// Largest frequency carried by the spanned atoms.
  long max_freq() const;
};

/// Parseval analysis: c_{j0,k} = sum_l conj(c_l(phi_{j0,k})) theta_l and
/// beta_{j,k} = sum_l conj(c_l(psi_{j,k})) theta_l. Imaginary parts up to
/// 1e-9 are dropped silently; larger ones set imag_warning.
WaveletCoefficients analyze(const FourierTable& theta, int j0, int j1);

/// Fourier table of sum c phi + sum beta psi.
FourierTable synthesize_fourier(const WaveletCoefficients& coeffs);

/// Grid values at k / G; G must be a power of two >= 2 * max frequency.
std::vector<double> synthesize(const WaveletCoefficients& coeffs,
                               std::size_t grid);

/// Level-j detail layer sum_k weights[k] psi_{j,k} as a Fourier table.
FourierTable detail_layer(int j, const std::vector<double>& weights);

/// sup_t |sum_k omega_k psi_{j,k}(t)| / 2^{j/2} on a 2^{j+6} grid.
double normalized_sup(int j, const std::vector<double>& omega);

/// Largest normalized_sup over `trials` random binary omega. j <= 10.
double sup_bound_constant(int j, int trials, std::uint64_t seed);

/// psi_tilde_{j,k} = sum_{l in Omega_j} gamma_l^{-1} c_l(psi_{j,k}) e_l.
struct DeconvolvedWavelet {
  FourierTable table;
  double l2_norm_sq = 0.0;
  double sup_norm = 0.0;
};

DeconvolvedWavelet deconvolved_wavelet(int j, long k,
                                       const ShiftSpectrum& gamma);

}  // namespace shiftpois::meyer
