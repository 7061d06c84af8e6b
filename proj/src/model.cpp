#include "shiftpois/model.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "shiftpois/errors.hpp"
#include "shiftpois/meyer.hpp"
#include "shiftpois/rng.hpp"

namespace shiftpois {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kNonnegGrid = std::size_t{1} << 14;
constexpr long kMaxBumpLevel = 12;
constexpr long kMaxPolyTerms = 8192;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double wrap01(double t) noexcept {
  double u = t - std::floor(t);
  return u >= 1.0 ? 0.0 : u;
}

// exp(-2 pi i l x) with the integer part of l * x removed first.
cplx neg_phase(long l, double x) noexcept {
  const double p = static_cast<double>(l) * x;
  const double frac = p - std::floor(p);
  return {std::cos(kTwoPi * frac), -std::sin(kTwoPi * frac)};
}

std::size_t grid_at_least(long band) {
  std::size_t g = 1;
  while (static_cast<long>(g) < 2 * band) g <<= 1;
  return g;
}

}  // namespace

double WaveletBump::xi() const noexcept {
  return c * std::pow(2.0, -static_cast<double>(D) * (s + 0.5));
}

IntensityModel IntensityModel::cosine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw ConfigError("cosine intensity needs finite a, b");
  if (a < std::abs(b))
    throw ConfigError("cosine intensity requires a >= |b| for nonnegativity");
  IntensityModel m;
  m.kind_ = Cosine{a, b};
  m.positive_ = {cplx{a, 0.0}, cplx{b / 2.0, 0.0}};
  m.finish();
  return m;
}

IntensityModel IntensityModel::poly_decay(double s, std::uint64_t phase_seed,
                                          long terms, double min_a) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw ConfigError("poly_decay needs s > 0");
  if (terms < 1 || terms > kMaxPolyTerms)
    throw ConfigError("poly_decay terms must lie in [1, " +
                      std::to_string(kMaxPolyTerms) + "]");
  IntensityModel m;
  m.positive_.assign(static_cast<std::size_t>(terms + 1), cplx{});
  Rng rng = Rng::keyed({phase_seed, 0}, 0, StreamPurpose::phases);
  for (long l = 1; l <= terms; ++l) {
    const double phase = kTwoPi * rng.uniform();
    const double amp = 0.5 * std::pow(static_cast<double>(l), -(s + 0.5));
    m.positive_[static_cast<std::size_t>(l)] = std::polar(amp, phase);
  }
  // Lowest point of the oscillating part on a fine grid.
  FourierTable osc(terms);
  for (long l = 1; l <= terms; ++l) {
    osc.at(l) = m.positive_[static_cast<std::size_t>(l)];
    osc.at(-l) = std::conj(m.positive_[static_cast<std::size_t>(l)]);
  }
  const auto grid = synthesize_grid(osc, std::max<std::size_t>(1 << 16, grid_at_least(terms)));
  const double osc_min = *std::min_element(grid.values.begin(), grid.values.end());
  const double a = std::max(min_a, kPolyDecayFloor - osc_min);
  m.positive_[0] = a;
  m.kind_ = PolyDecay{a, s, phase_seed, terms};
  m.finish();
  return m;
}

IntensityModel IntensityModel::piecewise_constant(std::vector<double> breakpoints,
                                                  std::vector<double> levels) {
  if (breakpoints.empty() || breakpoints.size() != levels.size())
    throw ConfigError("piecewise_constant needs matching, nonempty breakpoints and levels");
  if (breakpoints.front() != 0.0)
    throw ConfigError("piecewise_constant breakpoints must start at 0");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw ConfigError("piecewise_constant breakpoints must increase strictly");
  if (!(breakpoints.back() < 1.0))
    throw ConfigError("piecewise_constant breakpoints must lie in [0, 1)");
  for (double v : levels)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigError("piecewise_constant levels must be finite and >= 0");
  IntensityModel m;
  m.kind_ = PiecewiseConstant{std::move(breakpoints), std::move(levels)};
  m.finish();
  return m;
}

IntensityModel IntensityModel::wavelet_bump(WaveletBump p) {
  if (p.D < 0 || p.D > kMaxBumpLevel)
    throw ConfigError("wavelet_bump level D must lie in [0, 12]");
  if (p.omega.size() != (std::size_t{1} << p.D))
    throw ConfigError("wavelet_bump omega must have 2^D entries");
  for (auto b : p.omega)
    if (b > 1) throw ConfigError("wavelet_bump omega entries must be 0 or 1");
  if (!(p.c > 0.0) || !(p.s > 0.0) || !(p.c_psi > 0.0) || !(p.rho >= 0.0))
    throw ConfigError("wavelet_bump needs c, s, c_psi > 0 and rho >= 0");
  IntensityModel m;
  const double xi = p.xi();
  const long L = meyer::omega_max(p.D);
  const auto layer = meyer::detail_layer(
      p.D, std::vector<double>(p.omega.begin(), p.omega.end()));
  m.positive_.assign(static_cast<std::size_t>(L + 1), cplx{});
  m.positive_[0] = p.rho + xi * std::pow(2.0, p.D / 2.0) * p.c_psi;
  for (long l = 1; l <= L; ++l) m.positive_[static_cast<std::size_t>(l)] = xi * layer[l];
  m.kind_ = std::move(p);
  m.finish();
  return m;
}

void IntensityModel::finish() {
  if (const auto* pc = std::get_if<PiecewiseConstant>(&kind_)) {
    total_mass_ = 0.0;
    energy_ = 0.0;
    const auto& b = pc->breakpoints;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double w = (i + 1 < b.size() ? b[i + 1] : 1.0) - b[i];
      total_mass_ += pc->levels[i] * w;
      energy_ += pc->levels[i] * pc->levels[i] * w;
    }
    return;  // levels already checked >= 0
  }
  total_mass_ = positive_[0].real();
  energy_ = std::norm(positive_[0]);
  for (std::size_t l = 1; l < positive_.size(); ++l) energy_ += 2.0 * std::norm(positive_[l]);

  const auto values = eval_on_grid(std::max(kNonnegGrid, grid_at_least(*band_limit())));
  const double lo = *std::min_element(values.begin(), values.end());
  if (lo < -1e-12 * (1.0 + std::abs(total_mass_)))
    throw ConfigError("intensity takes negative values (min " + std::to_string(lo) +
                      " on the evaluation grid)");
}

std::optional<long> IntensityModel::band_limit() const noexcept {
  if (std::holds_alternative<PiecewiseConstant>(kind_)) return std::nullopt;
  return static_cast<long>(positive_.size()) - 1;
}

cplx IntensityModel::theta(long l) const {
  if (const auto* pc = std::get_if<PiecewiseConstant>(&kind_)) {
    if (l == 0) return total_mass_;
    const auto& b = pc->breakpoints;
    cplx acc{};
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double right = i + 1 < b.size() ? b[i + 1] : 1.0;
      acc += pc->levels[i] * (neg_phase(l, b[i]) - neg_phase(l, right));
    }
    return acc / cplx{0.0, kTwoPi * static_cast<double>(l)};
  }
  const long L = static_cast<long>(positive_.size()) - 1;
  if (l > L || l < -L) return {};
  const cplx v = positive_[static_cast<std::size_t>(std::labs(l))];
  return l < 0 ? std::conj(v) : v;
}

double IntensityModel::tail_energy(long M) const {
  if (M < 0) return energy_;
  return std::visit(
      overloaded{
          [&](const PiecewiseConstant&) {
            double inside = std::norm(theta(0));
            for (long l = 1; l <= M; ++l) inside += 2.0 * std::norm(theta(l));
            return std::max(0.0, energy_ - inside);
          },
          [&](const PolyDecay& p) {
            if (M >= p.terms) return 0.0;
            const double e = 2.0 * p.s + 1.0;
            return 0.5 * (hurwitz_zeta(e, static_cast<double>(M + 1)) -
                          hurwitz_zeta(e, static_cast<double>(p.terms + 1)));
          },
          [&](const auto&) {
            double t = 0.0;
            for (std::size_t l = static_cast<std::size_t>(M) + 1; l < positive_.size(); ++l)
              t += 2.0 * std::norm(positive_[l]);
            return t;
          }},
      kind_);
}

double IntensityModel::value(double t) const {
  const double u = wrap01(t);
  if (const auto* pc = std::get_if<PiecewiseConstant>(&kind_)) {
    const auto it = std::upper_bound(pc->breakpoints.begin(), pc->breakpoints.end(), u);
    return pc->levels[static_cast<std::size_t>(it - pc->breakpoints.begin()) - 1];
  }
  double acc = positive_[0].real();
  for (std::size_t l = 1; l < positive_.size(); ++l) {
    const double ang = kTwoPi * static_cast<double>(l) * u;
    acc += 2.0 * (positive_[l] * cplx{std::cos(ang), std::sin(ang)}).real();
  }
  return acc;
}

FourierTable IntensityModel::fourier_table(long M) const {
  FourierTable table(M);
  for (long l = -M; l <= M; ++l) table.at(l) = theta(l);
  return table;
}

std::vector<double> IntensityModel::eval_on_grid(std::size_t grid) const {
  if (!is_power_of_two(grid))
    throw std::invalid_argument("grid size must be a power of two");
  std::vector<double> out(grid);
  const bool direct =
      std::holds_alternative<PiecewiseConstant>(kind_) ||
      (std::holds_alternative<PolyDecay>(kind_) &&
       static_cast<long>(grid) < 2 * *band_limit());
  if (direct) {
    for (std::size_t k = 0; k < grid; ++k)
      out[k] = value(static_cast<double>(k) / static_cast<double>(grid));
    return out;
  }
  return synthesize_grid(fourier_table(*band_limit()), grid).values;
}

std::vector<double> IntensityModel::cumulative_on_grid(std::size_t grid) const {
  if (!is_power_of_two(grid))
    throw std::invalid_argument("grid size must be a power of two");
  std::vector<double> out(grid + 1);
  const double g = static_cast<double>(grid);
  if (const auto* pc = std::get_if<PiecewiseConstant>(&kind_)) {
    // Exact integral of the step function up to each node.
    const auto& b = pc->breakpoints;
    std::size_t piece = 0;
    double acc = 0.0;
    double last = 0.0;
    for (std::size_t k = 0; k <= grid; ++k) {
      const double t = static_cast<double>(k) / g;
      while (piece + 1 < b.size() && b[piece + 1] <= t) {
        acc += pc->levels[piece] * (b[piece + 1] - last);
        last = b[piece + 1];
        ++piece;
      }
      out[k] = acc + pc->levels[piece] * (t - last);
    }
    out[grid] = total_mass_;
    return out;
  }
  const long L = *band_limit();
  FourierTable anti(L);
  for (long l = -L; l <= L; ++l)
    if (l != 0) anti.at(l) = theta(l) / cplx{0.0, kTwoPi * static_cast<double>(l)};
  const auto v = synthesize_grid(anti, grid).values;
  for (std::size_t k = 0; k < grid; ++k)
    out[k] = total_mass_ * static_cast<double>(k) / g + v[k] - v[0];
  out[0] = 0.0;
  out[grid] = total_mass_;
  return out;
}

IntensityModel IntensityModel::with_offset(double offset) const {
  IntensityModel m = *this;
  std::visit(overloaded{[&](Cosine& c) { c.a += offset; },
                        [&](PolyDecay& p) { p.a += offset; },
                        [&](PiecewiseConstant& p) {
                          for (auto& v : p.levels) {
                            v += offset;
                            if (v < 0.0) throw ConfigError("offset makes intensity negative");
                          }
                        },
                        [&](WaveletBump& w) { w.rho += offset; }},
             m.kind_);
  if (!m.positive_.empty()) m.positive_[0] += offset;
  m.finish();
  return m;
}

ShiftDensity::ShiftDensity(Kind kind, double nu, double sigma)
    : kind_(kind), nu_(nu), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ConfigError("shift density needs sigma > 0");
  if (kind == Kind::laplace) {
    sup_norm_ = 1.0 / (2.0 * sigma);
  } else {
    if (!(nu >= 2.0) || !std::isfinite(nu))
      throw ConfigError("sym_gamma shift needs nu >= 2 (bounded density)");
    // Symmetric and unimodal: maximize over x >= 0 and compare with x = 0.
    const auto neg = [this](double x) { return -density(x); };
    const auto r = boost::math::tools::brent_find_minima(neg, 0.0, 10.0 * sigma, 40);
    sup_norm_ = std::max(-r.second, density(0.0));
  }
  c_lower_ = std::numeric_limits<double>::infinity();
  c_upper_ = 0.0;
  for (long l = 1; l <= (1L << 16); ++l) {
    const double v = gamma(l) * std::pow(static_cast<double>(l), nu_);
    c_lower_ = std::min(c_lower_, v);
    c_upper_ = std::max(c_upper_, v);
  }
}

ShiftDensity ShiftDensity::laplace(double sigma) {
  return ShiftDensity(Kind::laplace, 2.0, sigma);
}

ShiftDensity ShiftDensity::sym_gamma(double nu, double sigma) {
  return ShiftDensity(Kind::sym_gamma, nu, sigma);
}

double ShiftDensity::gamma(long l) const noexcept {
  const double w = kTwoPi * static_cast<double>(l) * sigma_;
  const double base = 1.0 + w * w;
  return kind_ == Kind::laplace ? 1.0 / base : std::pow(base, -nu_ / 2.0);
}

ShiftSpectrum ShiftDensity::spectrum() const {
  return [g = *this](long l) { return g.gamma(l); };
}

double ShiftDensity::density(double x) const {
  const double u = std::abs(x) / sigma_;
  if (kind_ == Kind::laplace) return std::exp(-u) / (2.0 * sigma_);
  // Difference of two Gamma(k, 1): |u|^{k-1/2} K_{k-1/2}(|u|) / (sqrt(pi) Gamma(k) 2^{k-1/2}).
  const double k = nu_ / 2.0;
  if (u == 0.0)
    return std::tgamma(2.0 * k - 1.0) /
           (std::pow(2.0, 2.0 * k - 1.0) * std::tgamma(k) * std::tgamma(k)) / sigma_;
  const double order = k - 0.5;
  return std::pow(u, order) * std::cyl_bessel_k(order, u) /
         (std::sqrt(std::numbers::pi) * std::tgamma(k) * std::pow(2.0, order)) / sigma_;
}

double ShiftDensity::sample(Rng& rng) const {
  if (kind_ == Kind::laplace) {
    const double u = rng.uniform_open() - 0.5;
    const double mag = -sigma_ * std::log1p(-2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
  }
  std::gamma_distribution<double> gd(nu_ / 2.0, 1.0);
  const double g1 = gd(rng);
  const double g2 = gd(rng);
  return sigma_ * (g1 - g2);
}

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw std::domain_error("hurwitz_zeta needs s > 1, q > 0");
  // Euler-Maclaurin with N direct terms and 7 Bernoulli corrections.
  constexpr int N = 24;
  static constexpr std::array<double, 7> bern{1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
                                              5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += std::pow(q + k, -s);
  const double a = q + N;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  double rising = s;  // s (s+1) ... (s+2m-2)
  double fact = 2.0;  // (2m)!
  double apow = std::pow(a, -s - 1.0);
  for (int m = 1; m <= 7; ++m) {
    sum += bern[static_cast<std::size_t>(m - 1)] / fact * rising * apow;
    rising *= (s + 2 * m - 1) * (s + 2 * m);
    fact *= (2.0 * m + 1.0) * (2.0 * m + 2.0);
    apow /= a * a;
  }
  return sum;
}

}  // namespace shiftpois
