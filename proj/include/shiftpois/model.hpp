// Intensity functions and shift densities with exact Fourier-side accessors.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "shiftpois/fourier.hpp"

namespace shiftpois {

class Rng;

/// lambda(t) = a + b cos(2 pi t), requires a >= |b|.
struct Cosine {
  double a = 0.0;
  double b = 0.0;
};

/// lambda(t) = a + Re sum_{1<=l<=terms} l^{-(s+1/2)} exp(i phi_l) exp(2 pi i l t)
/// with phases drawn from phase_seed. The level a is raised as needed so that
/// min lambda >= kPolyDecayFloor.
struct PolyDecay {
  double a = 0.0;
  double s = 1.0;
  std::uint64_t phase_seed = 0;
  long terms = 1024;
};

/// Level levels[i] on [breakpoints[i], breakpoints[i+1]), last piece ends at 1.
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> levels;
};

/// rho + xi_D sum_k omega_k psi_{D,k} + xi_D 2^{D/2} c_psi, xi_D = c 2^{-D(s+1/2)}.
struct WaveletBump {
  int D = 0;
  std::vector<std::uint8_t> omega;
  double s = 1.0;
  double c = 0.0;
  double A = 2.0;
  double c_psi = 1.0;
  double rho = 1.0;  // A / 2 for the test intensities of the lower bound

  double xi() const noexcept;
};

inline constexpr double kPolyDecayFloor = 0.1;

/// A nonnegative 1-periodic intensity. Immutable after construction.
class IntensityModel {
public:
  using Kind = std::variant<Cosine, PolyDecay, PiecewiseConstant, WaveletBump>;

  static IntensityModel cosine(double a, double b);
  static IntensityModel poly_decay(double s, std::uint64_t phase_seed,
                                   long terms = 1024, double min_a = 0.0);
  static IntensityModel piecewise_constant(std::vector<double> breakpoints,
                                           std::vector<double> levels);
  static IntensityModel wavelet_bump(WaveletBump params);

  const Kind& kind() const noexcept { return kind_; }

  /// theta_l = int_0^1 lambda(t) exp(-2 pi i l t) dt.
  cplx theta(long l) const;
  double total_mass() const noexcept { return total_mass_; }
  /// Set for kinds with a finite Fourier support (Cosine, PolyDecay, WaveletBump).
  std::optional<long> band_limit() const noexcept;

  /// ||lambda||_2^2
  double energy() const noexcept { return energy_; }
  /// sum_{|l| > M} |theta_l|^2, closed form per kind.
  double tail_energy(long M) const;

  /// Pointwise value with periodic extension.
  double value(double t) const;
  /// lambda(k/G), k = 0..G-1.
  std::vector<double> eval_on_grid(std::size_t grid) const;
  /// int_0^{k/G} lambda(t) dt for k = 0..G (last entry is total_mass).
  std::vector<double> cumulative_on_grid(std::size_t grid) const;

  /// Exact table theta_l, |l| <= M.
  FourierTable fourier_table(long M) const;

  /// Same shape with the constant level raised by `offset`.
  IntensityModel with_offset(double offset) const;

private:
  IntensityModel() = default;
  void finish();  // fills mass/energy, checks nonnegativity

  Kind kind_;
  std::vector<cplx> positive_;  // theta_0..theta_L for finite-support kinds
  double total_mass_ = 0.0;
  double energy_ = 0.0;
};

/// A symmetric shift law g on the real line with known Fourier coefficients.
class ShiftDensity {
public:
  enum class Kind { laplace, sym_gamma };

  /// g(x) = exp(-|x|/sigma) / (2 sigma); gamma_l = 1 / (1 + 4 pi^2 l^2 sigma^2).
  static ShiftDensity laplace(double sigma);
  /// sigma (G1 - G2), G_i ~ Gamma(nu/2, 1); gamma_l = (1 + 4 pi^2 l^2 sigma^2)^{-nu/2}.
  /// Requires nu >= 2 so that ||g||_inf is finite.
  static ShiftDensity sym_gamma(double nu, double sigma);

  Kind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  double ill_posedness() const noexcept { return nu_; }
  double sup_norm() const noexcept { return sup_norm_; }
  double tail_exponent() const noexcept { return alpha_; }

  double gamma(long l) const noexcept;
  ShiftSpectrum spectrum() const;
  double density(double x) const;
  double sample(Rng& rng) const;

  /// Constants (C', C) with C' |l|^-nu <= |gamma_l| <= C |l|^-nu on 1..2^16.
  std::pair<double, double> decay_bracket() const noexcept {
    return {c_lower_, c_upper_};
  }

private:
  ShiftDensity(Kind kind, double nu, double sigma);

  Kind kind_;
  double nu_;
  double sigma_;
  double sup_norm_ = 0.0;
  double alpha_ = 2.0;
  double c_lower_ = 0.0;
  double c_upper_ = 0.0;
};

/// Hurwitz zeta sum_{k>=0} (q + k)^{-s}, s > 1, q > 0.
double hurwitz_zeta(double s, double q);

}  // namespace shiftpois
