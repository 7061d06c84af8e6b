#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "oracles/meyer_real_line.hpp"
#include "shiftpois/meyer.hpp"
#include "shiftpois/model.hpp"
#include "shiftpois/rng.hpp"
#include "shiftpois/threshold.hpp"

using namespace shiftpois;
using namespace shiftpois::meyer;

namespace {

constexpr double kPi = std::numbers::pi;

std::set<long> as_set(const std::vector<long>& v) { return {v.begin(), v.end()}; }

// Fourier table of a single atom.
FourierTable atom(bool scaling, int j, long k) {
  const long L = scaling ? scaling_max(j) : omega_max(j);
  FourierTable t(L);
  for (long l = -L; l <= L; ++l) t.at(l) = scaling ? scaling_fourier_coeff(j, k, l) : wavelet_fourier_coeff(j, k, l);
  return t;
}

cplx inner(const FourierTable& a, const FourierTable& b) {
  const long L = std::max(a.max_freq(), b.max_freq());
  cplx acc{};
  for (long l = -L; l <= L; ++l) acc += a[l] * std::conj(b[l]);
  return acc;
}

}  // namespace

TEST_CASE("band sets") {
  CHECK(as_set(omega_set(0)) == std::set<long>{-1, 1});
  CHECK(as_set(omega_set(2)) == std::set<long>{-5, -4, -3, -2, 2, 3, 4, 5});
  for (int j = 0; j <= 12; ++j) {
    // Neighbouring bands overlap; bands two or more levels apart are disjoint
    // because the open intervals meet at the non-integer 2^{j+2}/3.
    const auto a = as_set(omega_set(j));
    const auto overlap = [&](int d) {
      const auto b = as_set(omega_set(j + d));
      std::vector<long> ab;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ab));
      return !ab.empty();
    };
    CHECK(overlap(1));
    CHECK_FALSE(overlap(2));
    CHECK_FALSE(overlap(3));
    CHECK(a.size() <= (std::size_t{1} << (j + 1)));
    for (long l : a) {
      const double w = 2.0 * kPi * std::abs(static_cast<double>(l)) / std::ldexp(1.0, j);
      CHECK(w >= 2.0 * kPi / 3.0);
      CHECK(w <= 8.0 * kPi / 3.0);
      CHECK(std::abs(psi_hat(w)) > 0.0);
    }
    CHECK(psi_hat(2.0 * kPi * (omega_min(j) - 1) / std::ldexp(1.0, j)) == cplx{});
    CHECK(psi_hat(2.0 * kPi * (omega_max(j) + 1) / std::ldexp(1.0, j)) == cplx{});
  }
}

TEST_CASE("windows vanish off their supports") {
  for (double w : {0.0, 2.0 * kPi / 3.0 - 1e-9, 8.0 * kPi / 3.0 + 1e-9, 20.0}) CHECK(psi_hat(w) == cplx{});
  CHECK(phi_hat(4.0 * kPi / 3.0 + 1e-9) == 0.0);
  CHECK(phi_hat(0.0) == 1.0);
  CHECK(phi_hat(2.0 * kPi / 3.0) == 1.0);
}

TEST_CASE("wavelet coefficients: support and norm") {
  CHECK(wavelet_fourier_coeff(3, 2, 1) == cplx{});
  CHECK(wavelet_fourier_coeff(3, 2, 11) == cplx{});
  CHECK(wavelet_fourier_coeff(3, 2, 0) == cplx{});
  for (auto [j, k] : {std::pair{3, 0L}, std::pair{5, 17L}}) {
    double sq = 0.0;
    for (long l : omega_set(j)) sq += std::norm(wavelet_fourier_coeff(j, k, l));
    CHECK(std::abs(sq - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(wavelet_fourier_coeff(3, 8, 4), std::out_of_range);
  CHECK_THROWS_AS(wavelet_fourier_coeff(3, -1, 4), std::out_of_range);
}

TEST_CASE("wavelet coefficient against a periodized real-line wavelet") {
  // psi_{4,3} times exp(-2 pi i 7 t) has frequencies within |l| <= 28, so the
  // 64-point trapezoid rule integrates it exactly up to the wavelet's value errors.
  const int S = 64;
  cplx acc{};
  for (int s = 0; s < S; ++s) {
    const double t = static_cast<double>(s) / S;
    acc += oracle::periodized_psi(4, 3, t, 256.0) * std::polar(1.0, -2.0 * kPi * 7.0 * t);
  }
  acc /= static_cast<double>(S);
  CHECK(std::abs(acc - wavelet_fourier_coeff(4, 3, 7)) < 1e-8);
}

TEST_CASE("Gram matrix up to level 5") {
  std::vector<FourierTable> atoms{atom(true, 0, 0)};
  for (int j = 0; j <= 5; ++j)
    for (long k = 0; k < (1L << j); ++k) atoms.push_back(atom(false, j, k));
  double worst = 0.0;
  for (std::size_t a = 0; a < atoms.size(); ++a)
    for (std::size_t b = a; b < atoms.size(); ++b)
      worst = std::max(worst, std::abs(inner(atoms[a], atoms[b]) - (a == b ? 1.0 : 0.0)));
  CHECK(worst < 1e-10);
}

TEST_CASE("scaling atoms at level j0 are orthonormal and orthogonal to details") {
  for (int j0 : {1, 3}) {
    for (long k = 0; k < (1L << j0); ++k) {
      const auto a = atom(true, j0, k);
      for (long m = 0; m < (1L << j0); ++m)
        CHECK(std::abs(inner(a, atom(true, j0, m)) - (k == m ? 1.0 : 0.0)) < 1e-12);
      for (int j = j0; j <= j0 + 2; ++j)
        for (long m = 0; m < (1L << j); ++m) CHECK(std::abs(inner(a, atom(false, j, m))) < 1e-12);
    }
  }
}

TEST_CASE("cached window magnitudes") {
  const auto& basis = MeyerBasis::shared();
  for (int j = 0; j <= kMaxCachedLevel; ++j) {
    for (long l = omega_min(j); l <= omega_max(j); ++l) REQUIRE(std::abs(basis.psi_window(j, l)) <= 1.0 + 1e-15);
    for (long l = 0; l <= scaling_max(j); ++l) REQUIRE(basis.phi_window(j, l) <= 1.0 + 1e-15);
  }
  for (int j : {0, 4, 9})
    for (long k : {0L, (1L << j) - 1})
      for (long l : omega_set(j)) CHECK(std::abs(wavelet_fourier_coeff(j, k, l)) <= std::pow(2.0, -0.5 * j) * (1 + 1e-15));
  CHECK_THROWS(basis.psi_window(kMaxCachedLevel + 1, 3));
}

TEST_CASE("analysis of trivial and single-atom inputs") {
  const auto z = analyze(FourierTable(100), 2, 4);
  for (double c : z.scaling) CHECK(c == 0.0);
  for (const auto& row : z.detail)
    for (double b : row) CHECK(b == 0.0);

  std::vector<double> w(8, 0.0);
  w[2] = 1.0;
  const auto theta = detail_layer(3, w);
  const auto c = analyze([&] {
    FourierTable t(omega_max(5));
    for (long l = -theta.max_freq(); l <= theta.max_freq(); ++l) t.at(l) = theta[l];
    return t;
  }(), 1, 5);
  for (double s : c.scaling) CHECK(std::abs(s) < 1e-10);
  for (int j = 1; j <= 5; ++j)
    for (long k = 0; k < (1L << j); ++k)
      CHECK(std::abs(c.detail_at(j, k) - (j == 3 && k == 2 ? 1.0 : 0.0)) < 1e-10);
  CHECK_FALSE(c.imag_warning);

  CHECK_THROWS_WITH_AS(analyze(FourierTable(3), 2, 4), doctest::Contains("missing frequencies"), std::invalid_argument);
}

TEST_CASE("round trip on a cosine") {
  const auto lam = IntensityModel::cosine(2.0, 1.0);
  const auto c = analyze(lam.fourier_table(omega_max(4)), 1, 4);
  const auto back = synthesize_fourier(c);
  for (long l = -back.max_freq(); l <= back.max_freq(); ++l) CHECK(std::abs(back[l] - lam.theta(l)) < 1e-10);
}

TEST_CASE("synthesis") {
  const auto zero = synthesize(WaveletCoefficients::zeros(1, 3), 64);
  for (double v : zero) CHECK(v == 0.0);

  auto c = WaveletCoefficients::zeros(0, -1);
  c.scaling[0] = 1.7;
  const auto v = synthesize(c, 64);
  double mean = 0.0;
  for (double x : v) mean += x;
  CHECK(mean / 64.0 == doctest::Approx(1.7).epsilon(1e-10));

  CHECK_THROWS_AS(synthesize(WaveletCoefficients::zeros(1, 5), 32), std::invalid_argument);
}

TEST_CASE("analyze then synthesize is the projection onto the span") {
  const auto lam = IntensityModel::poly_decay(1.5, 17, 200);
  const int j0 = 2, j1 = 6;
  const auto c = analyze(lam.fourier_table(200), j0, j1);
  const auto rebuilt = synthesize(c, 1024);
  // The span is V_{j1+1}; project with its scaling atoms directly.
  const int J = j1 + 1;
  const long L = scaling_max(J);
  FourierTable proj(L);
  for (long k = 0; k < (1L << J); ++k) {
    const auto phi = atom(true, J, k);
    const cplx coef = inner(lam.fourier_table(200), phi);
    for (long l = -L; l <= L; ++l) proj.at(l) += coef * phi[l];
  }
  const auto expected = synthesize_grid(proj, 1024).values;
  double worst = 0.0;
  for (std::size_t k = 0; k < 1024; ++k) worst = std::max(worst, std::abs(rebuilt[k] - expected[k]));
  CHECK(worst <= 1e-9);
}

TEST_CASE("synthesis is linear") {
  Rng rng(1);
  auto a = WaveletCoefficients::zeros(2, 4), b = a, s = a;
  for (std::size_t k = 0; k < a.scaling.size(); ++k) {
    a.scaling[k] = rng.uniform();
    b.scaling[k] = rng.uniform();
    s.scaling[k] = 2.0 * a.scaling[k] - b.scaling[k];
  }
  for (int j = 2; j <= 4; ++j)
    for (long k = 0; k < (1L << j); ++k) {
      a.detail_at(j, k) = rng.uniform();
      b.detail_at(j, k) = rng.uniform();
      s.detail_at(j, k) = 2.0 * a.detail_at(j, k) - b.detail_at(j, k);
    }
  const auto va = synthesize(a, 128), vb = synthesize(b, 128), vs = synthesize(s, 128);
  for (std::size_t k = 0; k < 128; ++k) CHECK(std::abs(vs[k] - (2.0 * va[k] - vb[k])) < 1e-12);
}

TEST_CASE("sup-bound constant") {
  CHECK(normalized_sup(3, std::vector<double>(8, 0.0)) == 0.0);

  // Mother wavelet: the library's 64-point grid against real-line evaluation.
  double direct = 0.0;
  for (int s = 0; s < 64; ++s) direct = std::max(direct, std::abs(oracle::periodized_psi(0, 0, s / 64.0, 64.0)));
  CHECK(normalized_sup(0, {1.0}) == doctest::Approx(direct).epsilon(1e-6));

  // Level 2 has 16 patterns, all reached by 64 trials: compare the maximum
  // with the real-line evaluation of the best pattern.
  const double lib2 = sup_bound_constant(2, 64, 4242);
  std::vector<std::array<double, 4>> atoms(256);
  for (int s = 0; s < 256; ++s)
    for (long k = 0; k < 4; ++k) atoms[s][k] = oracle::periodized_psi(2, k, s / 256.0, 48.0);
  double best = 0.0;
  for (unsigned mask = 1; mask < 16; ++mask) {
    double sup = 0.0;
    for (int s = 0; s < 256; ++s) {
      double v = 0.0;
      for (long k = 0; k < 4; ++k)
        if (mask >> k & 1U) v += atoms[s][k];
      sup = std::max(sup, std::abs(v) / 2.0);
    }
    best = std::max(best, sup);
  }
  CHECK(lib2 == doctest::Approx(best).epsilon(1e-6));

  std::vector<double> est;
  for (int j = 2; j <= 8; ++j) est.push_back(sup_bound_constant(j, 128, 4242));
  for (double e : est) CHECK(e <= 1.1 * est.back());
  // From level 4 on the estimates settle.
  const auto [lo, hi] = std::minmax_element(est.begin() + 2, est.end());
  CHECK((*hi - *lo) / *hi < 0.02);
  CHECK_THROWS(sup_bound_constant(11, 2, 1));
}

TEST_CASE("deconvolved wavelets") {
  const ShiftSpectrum unit = [](long) { return 1.0; };
  const auto d = deconvolved_wavelet(4, 5, unit);
  for (long l = -omega_max(4); l <= omega_max(4); ++l) CHECK(std::abs(d.table[l] - wavelet_fourier_coeff(4, 5, l)) < 1e-15);
  CHECK(d.l2_norm_sq == doctest::Approx(1.0).epsilon(1e-12));

  const auto g = ShiftDensity::laplace(0.05);
  std::vector<double> scaled;
  for (int j = 3; j <= 9; ++j)
    scaled.push_back(deconvolved_wavelet(j, 0, g.spectrum()).l2_norm_sq * std::pow(2.0, -4.0 * j));
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo <= 4.0);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int j = 1 + static_cast<int>(rng() % 10);
    const long k = static_cast<long>(rng() % (1UL << j));
    const auto dw = deconvolved_wavelet(j, k, g.spectrum());
    CHECK(dw.l2_norm_sq <= sigma2(j, g) * (1 + 1e-12));
    CHECK(dw.sup_norm > 0.0);
  }
}
