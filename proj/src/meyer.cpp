#include "shiftpois/meyer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shiftpois/rng.hpp"

namespace shiftpois::meyer {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kImagDropTol = 1e-9;

// Windows as functions of r = 3|w| / (2 pi), which is exact in index units.
double psi_magnitude(double r) noexcept {
  if (r < 1.0 || r > 4.0) return 0.0;
  if (r <= 2.0) return std::sin(kHalfPi * aux_poly(r - 1.0));
  return std::cos(kHalfPi * aux_poly(r / 2.0 - 1.0));
}

double phi_magnitude(double r) noexcept {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return std::cos(kHalfPi * aux_poly(r - 1.0));
}

double index_ratio(int j, long l) noexcept {
  return 3.0 * static_cast<double>(std::labs(l)) / std::ldexp(1.0, j);
}

void check_j(int j) {
  if (j < 0 || j > 40)
    throw std::invalid_argument("resolution level out of range: " +
                                std::to_string(j));
}

void check_k(int j, long k) {
  if (k < 0 || k >= (1L << j))
    throw std::out_of_range("translation index " + std::to_string(k) +
                            " out of range for level " + std::to_string(j));
}

long bin_of(long l, long n) noexcept {
  long b = l % n;
  return b < 0 ? b + n : b;
}

}  // namespace

double aux_poly(double x) noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x2 = x * x;
  return x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x);
}

cplx psi_hat(double omega) noexcept {
  const double r = 3.0 * std::abs(omega) / (2.0 * std::numbers::pi);
  const double b = psi_magnitude(r);
  if (b == 0.0) return {};
  return b * cplx{std::cos(omega / 2.0), -std::sin(omega / 2.0)};
}

double phi_hat(double omega) noexcept {
  return phi_magnitude(3.0 * std::abs(omega) / (2.0 * std::numbers::pi));
}

long omega_min(int j) {
  check_j(j);
  return (1L << j) / 3 + 1;
}

long omega_max(int j) {
  check_j(j);
  return ((1L << (j + 2)) - 1) / 3;
}

std::vector<long> omega_set(int j) {
  const long lo = omega_min(j);
  const long hi = omega_max(j);
  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(2 * (hi - lo + 1)));
  for (long l = -hi; l <= -lo; ++l) out.push_back(l);
  for (long l = lo; l <= hi; ++l) out.push_back(l);
  return out;
}

long scaling_max(int j) {
  check_j(j);
  return ((1L << (j + 1)) - 1) / 3;
}

cplx wavelet_fourier_coeff(int j, long k, long l) {
  check_j(j);
  check_k(j, k);
  const double b = psi_magnitude(index_ratio(j, l));
  if (b == 0.0) return {};
  // -2 pi l k / 2^j - pi l / 2^j = -2 pi l (2k + 1) / 2^{j+1}
  return b * std::pow(2.0, -0.5 * j) *
         unit_phase(-l * (2 * k + 1), 1L << (j + 1));
}

cplx scaling_fourier_coeff(int j, long k, long l) {
  check_j(j);
  check_k(j, k);
  const double b = phi_magnitude(index_ratio(j, l));
  if (b == 0.0) return {};
  return b * std::pow(2.0, -0.5 * j) * unit_phase(-l * k, 1L << j);
}

MeyerBasis::MeyerBasis(int max_level) : max_level_(max_level) {
  if (max_level < 0 || max_level > kMaxCachedLevel)
    throw std::invalid_argument("Meyer cache capped at level " +
                                std::to_string(kMaxCachedLevel));
  psi_.resize(static_cast<std::size_t>(max_level + 1));
  phi_.resize(static_cast<std::size_t>(max_level + 1));
  for (int j = 0; j <= max_level; ++j) {
    const long lo = omega_min(j);
    const long hi = omega_max(j);
    auto& pw = psi_[static_cast<std::size_t>(j)];
    pw.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long l = lo; l <= hi; ++l)
      pw.push_back(psi_magnitude(index_ratio(j, l)) *
                   unit_phase(-l, 1L << (j + 1)));
    auto& fw = phi_[static_cast<std::size_t>(j)];
    const long smax = scaling_max(j);
    fw.reserve(static_cast<std::size_t>(smax + 1));
    for (long l = 0; l <= smax; ++l) fw.push_back(phi_magnitude(index_ratio(j, l)));
  }
}

const MeyerBasis& MeyerBasis::shared() {
  static const MeyerBasis basis(kMaxCachedLevel);
  return basis;
}

void MeyerBasis::check_level(int j) const {
  if (j < 0 || j > max_level_)
    throw std::out_of_range("level " + std::to_string(j) +
                            " not in Meyer cache");
}

cplx MeyerBasis::psi_window(int j, long l) const {
  check_level(j);
  const long a = std::labs(l);
  const long lo = omega_min(j);
  if (a < lo || a > omega_max(j)) return {};
  const cplx w = psi_[static_cast<std::size_t>(j)][static_cast<std::size_t>(a - lo)];
  return l < 0 ? std::conj(w) : w;
}

double MeyerBasis::phi_window(int j, long l) const {
  check_level(j);
  const long a = std::labs(l);
  if (a > scaling_max(j)) return 0.0;
  return phi_[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
}

WaveletCoefficients WaveletCoefficients::zeros(int j0, int j1) {
  check_j(j0);
  if (j1 < j0 - 1) throw std::invalid_argument("j1 must be >= j0 - 1");
  WaveletCoefficients w;
  w.j0 = j0;
  w.j1 = j1;
  w.scaling.assign(std::size_t{1} << j0, 0.0);
  for (int j = j0; j <= j1; ++j) w.detail.emplace_back(std::size_t{1} << j, 0.0);
  return w;
}

double WaveletCoefficients::detail_at(int j, long k) const {
  return detail.at(static_cast<std::size_t>(j - j0)).at(static_cast<std::size_t>(k));
}

double& WaveletCoefficients::detail_at(int j, long k) {
  return detail.at(static_cast<std::size_t>(j - j0)).at(static_cast<std::size_t>(k));
}

long WaveletCoefficients::max_freq() const {
  long m = scaling_max(j0);
  if (j1 >= j0) m = std::max(m, omega_max(j1));
  return m;
}

namespace {

// Folds window-weighted coefficients into 2^j bins and returns
// 2^{-j/2} sum_r a_r exp(2 pi i r k / 2^j) for every k.
template <class Window>
std::vector<cplx> fold_and_analyze(const FourierTable& theta, int j, long lmax,
                                   Window window) {
  const long n = 1L << j;
  std::vector<cplx> bins(static_cast<std::size_t>(n));
  for (long l = -lmax; l <= lmax; ++l) {
    const cplx w = window(l);
    if (w == cplx{}) continue;
    bins[static_cast<std::size_t>(bin_of(l, n))] += std::conj(w) * theta[l];
  }
  auto out = inverse_dft(std::move(bins));
  const double scale = std::pow(2.0, -0.5 * j);
  for (auto& v : out) v *= scale;
  return out;
}

double take_real(const cplx& v, WaveletCoefficients& w) {
  const double im = std::abs(v.imag());
  w.max_imag = std::max(w.max_imag, im);
  if (im > kImagDropTol * (1.0 + std::abs(v.real()))) w.imag_warning = true;
  return v.real();
}

}  // namespace

WaveletCoefficients analyze(const FourierTable& theta, int j0, int j1) {
  auto out = WaveletCoefficients::zeros(j0, j1);
  if (theta.max_freq() < out.max_freq())
    throw std::invalid_argument(
        "missing frequencies: analysis needs |l| <= " +
        std::to_string(out.max_freq()) + ", table has " +
        std::to_string(theta.max_freq()));
  const auto& basis = MeyerBasis::shared();

  const auto c = fold_and_analyze(theta, j0, scaling_max(j0), [&](long l) {
    return cplx{basis.phi_window(j0, l), 0.0};
  });
  for (std::size_t k = 0; k < c.size(); ++k) out.scaling[k] = take_real(c[k], out);

  for (int j = j0; j <= j1; ++j) {
    const auto b = fold_and_analyze(theta, j, omega_max(j),
                                    [&](long l) { return basis.psi_window(j, l); });
    auto& level = out.detail[static_cast<std::size_t>(j - j0)];
    for (std::size_t k = 0; k < b.size(); ++k) level[k] = take_real(b[k], out);
  }
  return out;
}

namespace {

template <class Window>
void add_layer(FourierTable& table, int j, long lmax,
               const std::vector<double>& weights, Window window) {
  const long n = 1L << j;
  std::vector<cplx> w(weights.begin(), weights.end());
  const auto spectrum = forward_dft(std::move(w));
  const double scale = std::pow(2.0, -0.5 * j);
  for (long l = -lmax; l <= lmax; ++l) {
    const cplx win = window(l);
    if (win == cplx{}) continue;
    table.at(l) += scale * win * spectrum[static_cast<std::size_t>(bin_of(l, n))];
  }
}

}  // namespace

FourierTable detail_layer(int j, const std::vector<double>& weights) {
  if (weights.size() != (std::size_t{1} << j))
    throw std::invalid_argument("detail layer needs 2^j weights");
  const auto& basis = MeyerBasis::shared();
  FourierTable table(omega_max(j));
  add_layer(table, j, omega_max(j), weights,
            [&](long l) { return basis.psi_window(j, l); });
  return table;
}

FourierTable synthesize_fourier(const WaveletCoefficients& coeffs) {
  const auto& basis = MeyerBasis::shared();
  FourierTable table(coeffs.max_freq());
  const int j0 = coeffs.j0;
  add_layer(table, j0, scaling_max(j0), coeffs.scaling,
            [&](long l) { return cplx{basis.phi_window(j0, l), 0.0}; });
  for (int j = j0; j <= coeffs.j1; ++j)
    add_layer(table, j, omega_max(j), coeffs.detail[static_cast<std::size_t>(j - j0)],
              [&](long l) { return basis.psi_window(j, l); });
  return table;
}

std::vector<double> synthesize(const WaveletCoefficients& coeffs,
                               std::size_t grid) {
  return synthesize_grid(synthesize_fourier(coeffs), grid).values;
}

double normalized_sup(int j, const std::vector<double>& omega) {
  const auto table = detail_layer(j, omega);
  const auto grid = synthesize_grid(table, std::size_t{1} << (j + 6));
  double sup = 0.0;
  for (double v : grid.values) sup = std::max(sup, std::abs(v));
  return sup * std::pow(2.0, -0.5 * j);
}

double sup_bound_constant(int j, int trials, std::uint64_t seed) {
  if (j < 0 || j > 10)
    throw std::invalid_argument("sup_bound_constant supports 0 <= j <= 10");
  double best = 0.0;
  const std::size_t n = std::size_t{1} << j;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::keyed({seed, static_cast<std::uint64_t>(j)},
                         static_cast<std::uint64_t>(t), StreamPurpose::signs);
    std::vector<double> omega(n);
    for (auto& b : omega) b = static_cast<double>(rng() >> 63);
    best = std::max(best, normalized_sup(j, omega));
  }
  return best;
}

DeconvolvedWavelet deconvolved_wavelet(int j, long k,
                                       const ShiftSpectrum& gamma) {
  check_j(j);
  check_k(j, k);
  DeconvolvedWavelet out{FourierTable(omega_max(j)), 0.0, 0.0};
  for (long l : omega_set(j)) {
    const double g = gamma(l);
    if (g == 0.0) throw std::domain_error("gamma_l vanishes on Omega_j");
    const cplx v = wavelet_fourier_coeff(j, k, l) / g;
    out.table.at(l) = v;
    out.l2_norm_sq += std::norm(v);
  }
  const auto grid = synthesize_grid(out.table, std::size_t{1} << (j + 6));
  for (double v : grid.values) out.sup_norm = std::max(out.sup_norm, std::abs(v));
  return out;
}

}  // namespace shiftpois::meyer
