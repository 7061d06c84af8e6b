// Fourier tables for real 1-periodic functions on [0, 1).
//
// Convention: c_l = int_0^1 f(t) exp(-2 pi i l t) dt and
// f(t) = sum_l c_l exp(2 pi i l t).
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace shiftpois {

using cplx = std::complex<double>;

/// Fourier coefficients of a shift law, l -> gamma_l (real and even).
using ShiftSpectrum = std::function<double(long)>;

/// Coefficients c_l for |l| <= max_freq; zero outside.
class FourierTable {
public:
  FourierTable() = default;
  explicit FourierTable(long max_freq);

  long max_freq() const noexcept { return max_freq_; }

  /// c_l, or 0 when |l| > max_freq.
  cplx operator[](long l) const noexcept;
  cplx& at(long l);

  /// sum_l |c_l|^2
  double energy() const noexcept;

  /// exp(2 pi i l t) synthesis at a single point (real part).
  double value(double t) const noexcept;

  const std::vector<cplx>& raw() const noexcept { return c_; }

private:
  long max_freq_ = -1;
  std::vector<cplx> c_;
};

struct GridValues {
  std::vector<double> values;
  double max_imag = 0.0;  // largest |Im| of the synthesized samples
};

bool is_power_of_two(std::size_t g) noexcept;

/// Values f(k/G), k = 0..G-1, by inverse DFT. Requires G a power of two with
/// G >= 2 * max_freq; throws std::invalid_argument otherwise.
GridValues synthesize_grid(const FourierTable& table, std::size_t grid);

/// out[k] = sum_r bins[r] exp(+2 pi i r k / G).
std::vector<cplx> inverse_dft(std::vector<cplx> bins);
/// out[k] = sum_r x[r] exp(-2 pi i r k / G).
std::vector<cplx> forward_dft(std::vector<cplx> x);

/// Reduces 2 pi * num / den to a phase without losing integer precision.
cplx unit_phase(long num, long den) noexcept;

}  // namespace shiftpois
