#include "shiftpois/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shiftpois/errors.hpp"

namespace shiftpois {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr long kReanchor = 64;

cplx neg_unit(long l, double t) noexcept {
  const double p = static_cast<double>(l) * t;
  const double frac = p - std::floor(p);
  return {std::cos(kTwoPi * frac), -std::sin(kTwoPi * frac)};
}

}  // namespace

Filter Filter::cutoff(long M) {
  if (M < 0) throw ConfigError("cutoff M must be >= 0");
  return from_values(std::vector<double>(static_cast<std::size_t>(2 * M + 1), 1.0));
}

Filter Filter::from_values(std::vector<double> values) {
  if (values.size() % 2 == 0) throw ConfigError("filter needs 2L + 1 values");
  for (double d : values)
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("filter values must lie in [0, 1]");
  Filter f;
  f.max_freq_ = static_cast<long>(values.size() / 2);
  f.d_ = std::move(values);
  return f;
}

double Filter::operator[](long l) const noexcept {
  if (l > max_freq_ || l < -max_freq_) return 0.0;
  return d_[static_cast<std::size_t>(l + max_freq_)];
}

GridValues IntensityEstimate::on_grid(std::size_t grid) const {
  auto g = synthesize_grid(coefficients, grid);
  if (clip_negative)
    for (auto& v : g.values) v = std::max(v, 0.0);
  return g;
}

FourierStats empirical_fourier(const TrajectorySet& data, long L) {
  if (L < 0) throw ConfigError("empirical_fourier needs L >= 0");
  FourierStats st;
  st.n = data.size();
  st.y = FourierTable(L);
  if (st.n == 0) return st;
  std::vector<cplx> acc(static_cast<std::size_t>(L + 1));
  for (const auto& tr : data.trajectories) {
    for (double t : tr) {
      const cplx step = neg_unit(1, t);
      cplx w{1.0, 0.0};
      for (long l = 0; l <= L; ++l) {
        if (l % kReanchor == 0) w = neg_unit(l, t);
        acc[static_cast<std::size_t>(l)] += w;
        w *= step;
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(st.n);
  st.y.at(0) = acc[0].real() * inv;
  for (long l = 1; l <= L; ++l) {
    const cplx v = acc[static_cast<std::size_t>(l)] * inv;
    st.y.at(l) = v;
    st.y.at(-l) = std::conj(v);
  }
  return st;
}

cplx empirical_char(const std::vector<double>& shifts, long l) {
  if (shifts.empty()) throw DataError("latent shifts unavailable");
  if (l == 0) return {1.0, 0.0};
  cplx acc{};
  for (double tau : shifts) acc += neg_unit(l, tau);
  return acc / static_cast<double>(shifts.size());
}

cplx empirical_char(const TrajectorySet& data, long l) {
  if (!data.shifts) throw DataError("latent shifts unavailable");
  return empirical_char(*data.shifts, l);
}

FourierTable deconvolve(const FourierStats& stats, const ShiftSpectrum& gamma,
                        const Filter& filter) {
  const long L = filter.support();
  if (L > stats.max_freq())
    throw std::invalid_argument("filter support exceeds the empirical frequency range");
  FourierTable out(std::max(L, 0L));
  for (long l = -L; l <= L; ++l) {
    const double d = filter[l];
    if (d == 0.0) continue;
    const double gl = gamma(l);
    if (gl == 0.0)
      throw DataError("shift spectrum vanishes at frequency " + std::to_string(l));
    out.at(l) = d * stats.y[l] / gl;
  }
  return out;
}

FourierTable deconvolve(const FourierStats& stats, const ShiftDensity& g, const Filter& filter) {
  return deconvolve(stats, g.spectrum(), filter);
}

IntensityEstimate linear_estimate(const TrajectorySet& data, const ShiftDensity& g, long M) {
  const Filter f = Filter::cutoff(M);
  return {deconvolve(empirical_fourier(data, M), g, f), false};
}

double linear_risk_exact(const IntensityModel& lambda, const ShiftSpectrum& gamma,
                         const Filter& filter, std::size_t n) {
  if (n < 1) throw ConfigError("linear_risk_exact needs n >= 1");
  const long L = filter.support();
  const double nn = static_cast<double>(n);
  const double mass = lambda.total_mass();
  double bias = 0.0, poisson = 0.0, shift = 0.0;
  for (long l = -L; l <= L; ++l) {
    const double d = filter[l];
    const double t2 = std::norm(lambda.theta(l));
    bias += t2 * (d - 1.0) * (d - 1.0);
    if (d == 0.0) continue;
    const double g2 = gamma(l) * gamma(l);
    if (g2 > 1.0 + 1e-12)
      throw std::logic_error("|gamma_l| > 1 at l = " + std::to_string(l));
    poisson += d * d / nn / g2 * mass;
    shift += d * d / nn * t2 * (1.0 / g2 - 1.0);
  }
  return bias + poisson + shift + lambda.tail_energy(L);
}

double linear_risk_exact(const IntensityModel& lambda, const ShiftDensity& g,
                         const Filter& filter, std::size_t n) {
  return linear_risk_exact(lambda, g.spectrum(), filter, n);
}

long choose_cutoff(std::size_t n, double s, double nu) {
  if (n < 1) throw ConfigError("choose_cutoff needs n >= 1");
  if (!(s > 0.0) || !(nu > 0.0)) throw ConfigError("choose_cutoff needs s, nu > 0");
  const double p = 2.0 * s + 2.0 * nu + 1.0;
  const double nn = static_cast<double>(n);
  long M = static_cast<long>(std::floor(std::pow(nn, 1.0 / p)));
  // Integer check M^p <= n with a relative tolerance for exact powers.
  const auto fits = [&](long m) { return std::pow(static_cast<double>(m), p) <= nn * (1.0 + 1e-12); };
  while (fits(M + 1)) ++M;
  while (M > 1 && !fits(M)) --M;
  return std::max(M, 1L);
}

}  // namespace shiftpois
