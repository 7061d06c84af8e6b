#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mc.hpp"
#include "oracles/hp_formulas.hpp"
#include "shiftpois/bench.hpp"
#include "shiftpois/errors.hpp"
#include "shiftpois/meyer.hpp"
#include "shiftpois/threshold.hpp"

using namespace shiftpois;

namespace {
constexpr std::uint64_t kSeed = 4242;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ThresholdParams extend_params() {
  ThresholdParams p;
  p.schedule = LevelSchedule::extend_finest;
  return p;
}
}  // namespace

TEST_CASE("sigma2 and epsilon with a flat spectrum") {
  const ShiftSpectrum one = [](long) { return 1.0; };
  for (int j = 0; j <= 9; ++j) {
    const double m = static_cast<double>(meyer::omega_set(j).size());
    CHECK(sigma2(j, one) == doctest::Approx(m * std::ldexp(1.0, -j)).epsilon(1e-14));
    CHECK(epsilon(j, one) == doctest::Approx(m * std::pow(2.0, -0.5 * j)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(sigma2(-1, one), ConfigError);
}

TEST_CASE("sigma2 and epsilon against 50-digit sums, Laplace(0.1), j = 4") {
  const auto g = ShiftDensity::laplace(0.1);
  CHECK(rel(sigma2(4, g), static_cast<double>(oracle::sigma2(4, 2, oracle::hp("0.1")))) < 1e-12);
  CHECK(rel(epsilon(4, g), static_cast<double>(oracle::epsilon(4, 2, oracle::hp("0.1")))) < 1e-12);
}

TEST_CASE("sigma2 grows like 2^{2 j nu}") {
  for (const auto& g : {ShiftDensity::laplace(0.1), ShiftDensity::sym_gamma(3.0, 0.1)}) {
    double lo = INFINITY, hi = 0.0;
    for (int j = 4; j <= 10; ++j) {
      const double r = sigma2(j, g) * std::pow(2.0, -2.0 * j * g.ill_posedness());
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 4.0);
  }
}

TEST_CASE("k_tilde") {
  // Zero counts, n = 100, gamma = 2.
  const double ln = std::log(100.0);
  const double first = 8.0 * ln / 300.0;
  const double second = std::sqrt(20.0 * ln * ln / 3e4);
  CHECK(first == doctest::Approx(0.1228045383).epsilon(1e-9));
  CHECK(second == doctest::Approx(0.1189049829).epsilon(1e-9));
  CHECK(rel(k_tilde(std::vector<long>(100, 0), 2.0), first + second) < 1e-14);
  CHECK(rel(k_tilde(0, 100, 2.0), static_cast<double>(oracle::k_tilde(0, 100, 2))) < 1e-13);

  std::vector<long> counts(50, 3);
  double prev = k_tilde(counts, 2.0);
  for (std::size_t i = 0; i < counts.size(); i += 7) {
    counts[i] += 5;
    const double cur = k_tilde(counts, 2.0);
    CHECK(cur >= prev);
    prev = cur;
  }

  CHECK_THROWS_AS(k_tilde(std::vector<long>{4}, 2.0), ConfigError);
  CHECK_THROWS_AS(k_tilde(std::vector<long>{}, 2.0), ConfigError);
}

TEST_CASE("k_tilde tends to the total mass") {
  Rng rng = Rng::keyed({kSeed, 0}, 0, StreamPurpose::aux);
  // Unit mass: the radical alone adds sqrt(2 gamma ln n ||lambda||_1 / n) ~ 0.0074.
  std::poisson_distribution<long> pois(1.0);
  std::vector<long> counts(1000000);
  for (auto& k : counts) k = pois(rng);
  CHECK(std::abs(k_tilde(counts, 2.0) - 1.0) < 0.01);
}

TEST_CASE("random_threshold") {
  const auto g = ShiftDensity::laplace(0.1);
  ThresholdParams p;

  SUBCASE("vanishing radical") {
    p.delta = 1e-300;
    const double ln = std::log(1000.0);
    CHECK(rel(random_threshold(3, 1000, p, g, 0.0), 4.0 * (2.0 * ln / 3000.0) * epsilon(3, g)) < 1e-12);
  }
  SUBCASE("full numeric j = 3, n = 1000") {
    const double kt = 2.37;
    const double want = static_cast<double>(
        oracle::threshold(3, 1000, 2, 1, 2, oracle::hp("0.1"), g.sup_norm(), kt));
    CHECK(rel(random_threshold(3, 1000, p, g, kt), want) < 1e-12);
  }
  SUBCASE("nondecreasing in j") {
    for (const auto& gg : {ShiftDensity::laplace(0.05), ShiftDensity::laplace(0.5),
                           ShiftDensity::sym_gamma(4.0, 0.05), ShiftDensity::sym_gamma(2.5, 0.3)}) {
      for (std::size_t n : {std::size_t{1000}, std::size_t{1} << 16, std::size_t{10000000}}) {
        const auto lv = resolution_levels(n, gg.ill_posedness(), LevelSchedule::extend_finest);
        double prev = 0.0;
        for (int j = std::max(0, lv.j0 - 2); j <= lv.j1 + 3; ++j) {
          const double s = random_threshold(j, n, p, gg, 2.0);
          CHECK(s >= prev);
          prev = s;
        }
      }
    }
  }
}

TEST_CASE("threshold formulas on 50 random tuples") {
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int j = static_cast<int>(gen() % 11);
    const long n = 2 + static_cast<long>(gen() % 10000000);
    const double gam = 2.0 + 3.0 * U(gen);
    const double delta = 0.01 + 2.0 * U(gen);
    const double sigma = 0.01 + 0.49 * U(gen);
    const double nu = (t % 2 == 0) ? 2.0 : 2.0 + 4.0 * U(gen);
    const double kt = 5.0 * U(gen);
    const auto g = nu == 2.0 ? ShiftDensity::laplace(sigma) : ShiftDensity::sym_gamma(nu, sigma);
    const oracle::hp hs(sigma), hn(nu);
    ThresholdParams p;
    p.gamma = gam;
    p.delta = delta;
    CAPTURE(t);
    CHECK(rel(sigma2(j, g), static_cast<double>(oracle::sigma2(j, hn, hs))) < 1e-12);
    CHECK(rel(epsilon(j, g), static_cast<double>(oracle::epsilon(j, hn, hs))) < 1e-12);
    const long total = static_cast<long>(gen() % 100000);
    CHECK(rel(k_tilde(total, static_cast<std::size_t>(n), gam),
              static_cast<double>(oracle::k_tilde(total, n, gam))) < 1e-12);
    CHECK(rel(random_threshold(j, static_cast<std::size_t>(n), p, g, kt),
              static_cast<double>(oracle::threshold(j, n, gam, delta, hn, hs, g.sup_norm(), kt))) < 1e-12);
    if (n >= 8) {
      const auto [j0, j1] = oracle::levels(n, hn);
      const auto lv = resolution_levels(static_cast<std::size_t>(n), nu, LevelSchedule::extend_finest);
      CHECK(lv.j0 == j0);
      CHECK(lv.extended == (j0 > j1));
      CHECK(lv.j1 == std::max(j0, j1));
    }
  }
}

TEST_CASE("resolution levels") {
  auto lv = resolution_levels(1000, 1.0);
  CHECK(lv.j0 == 2);
  CHECK(lv.j1 == 2);
  lv = resolution_levels(1000000, 2.0);
  CHECK(lv.j0 == 3);
  CHECK(lv.j1 == 3);
  CHECK_FALSE(lv.extended);
  CHECK_THROWS_AS(resolution_levels(10, 3.0), ScheduleError);
  CHECK_THROWS_AS(resolution_levels(7, 0.5), ScheduleError);
  CHECK_THROWS_AS(resolution_levels(1000, 0.0), ConfigError);

  lv = resolution_levels(10, 3.0, LevelSchedule::extend_finest);
  CHECK(lv.j0 == 1);
  CHECK(lv.j1 == 1);
  CHECK(lv.extended);

  for (long n : {8L, 9L, 20L, 55L, 1096L, 1097L, 65536L, 3000000L}) {
    for (const char* nu : {"0.5", "1", "2", "3.5"}) {
      const auto [j0, j1] = oracle::levels(n, oracle::hp(nu));
      const auto got = resolution_levels(static_cast<std::size_t>(n), std::stod(nu),
                                         LevelSchedule::extend_finest);
      CAPTURE(n);
      CAPTURE(nu);
      CHECK(got.j0 == j0);
      CHECK(got.j1 == std::max(j0, j1));
    }
  }
}

TEST_CASE("hard threshold keeps ties") {
  auto c = meyer::WaveletCoefficients::zeros(1, 2);
  c.detail[0] = {0.5, -0.5};
  c.detail[1] = {0.3, -0.29, 0.31, 0.0};
  const auto kept = apply_hard_threshold(c, {0.5, 0.3});
  CHECK(kept == std::vector<long>{2, 2});
  CHECK(c.detail[0] == std::vector<double>{0.5, -0.5});
  CHECK(c.detail[1] == std::vector<double>{0.3, 0.0, 0.31, 0.0});
  CHECK_THROWS(apply_hard_threshold(c, {0.1}));
}

TEST_CASE("threshold params validation") {
  ThresholdParams p;
  CHECK_NOTHROW(p.validate());
  p.gamma = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.gamma = 2.0;
  p.delta = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("adaptive estimate of an empty dataset is zero") {
  TrajectorySet empty;
  empty.trajectories.resize(1000);
  const auto g = ShiftDensity::laplace(0.05);
  const auto res = adaptive_estimate(empty, g, extend_params());
  CHECK(res.estimate.coefficients.energy() == 0.0);
  for (long k : res.diagnostics.kept) CHECK(k == 0);
  CHECK(res.diagnostics.k_tilde < 0.1);

  CHECK_THROWS_AS(adaptive_estimate(empty, g, ThresholdParams{}), ScheduleError);
}

TEST_CASE("adaptive estimate of a constant intensity") {
  const double c = 3.0;
  const auto lam = IntensityModel::cosine(c, 0.0);
  const auto g = ShiftDensity::laplace(0.05);
  const IntensitySampler sampler(lam);
  int good = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto data = sample_dataset(sampler, g, 10000, {kSeed + 1, r}, false);
    const auto v = adaptive_estimate(data, g, extend_params()).estimate.on_grid(1024).values;
    double mad = 0.0;
    for (double x : v) mad += std::abs(x - c);
    if (mad / static_cast<double>(v.size()) < 0.1) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("adaptive estimate: median MISE falls with n") {
  const auto lam = IntensityModel::cosine(2.0, 1.0);
  const auto g = ShiftDensity::laplace(0.05);
  const IntensitySampler sampler(lam);
  std::vector<double> medians;
  for (std::size_t n : {std::size_t{256}, std::size_t{1024}, std::size_t{4096}}) {
    std::vector<double> m;
    for (std::uint64_t r = 0; r < 60; ++r) {
      const auto data = sample_dataset(sampler, g, n, {kSeed + 2, r}, false);
      m.push_back(mise(adaptive_estimate(data, g, extend_params()).estimate, lam));
    }
    std::nth_element(m.begin(), m.begin() + 30, m.end());
    medians.push_back(m[30]);
  }
  CAPTURE(medians[0]);
  CAPTURE(medians[1]);
  CAPTURE(medians[2]);
  CHECK(medians[1] < medians[0]);
  CHECK(medians[2] < medians[1]);
}

TEST_CASE("adaptive estimate replays bit for bit") {
  const auto lam = IntensityModel::poly_decay(1.5, 9, 64);
  const auto g = ShiftDensity::sym_gamma(3.0, 0.05);
  const auto data = sample_dataset(lam, g, 5000, {kSeed, 3});
  auto p = extend_params();
  p.clip_negative = true;
  const auto a = adaptive_estimate(data, g, p);
  const auto b = adaptive_estimate(data, g, p);
  CHECK(a.estimate.coefficients.raw() == b.estimate.coefficients.raw());
  CHECK(a.estimate.on_grid(512).values == b.estimate.on_grid(512).values);
  CHECK(a.diagnostics.thresholds == b.diagnostics.thresholds);
  CHECK(a.diagnostics.kept == b.diagnostics.kept);
}

TEST_CASE("detail errors rarely exceed half the threshold") {
  // Heuristic desk-scale version of the deviation bound.
  const auto lam = IntensityModel::cosine(2.0, 1.0);
  const auto g = ShiftDensity::laplace(0.05);
  const IntensitySampler sampler(lam);
  const std::size_t n = 1000;
  const auto lv = resolution_levels(n, g.ill_posedness(), LevelSchedule::extend_finest);
  const long L = std::max(meyer::scaling_max(lv.j0), meyer::omega_max(lv.j1));
  const auto truth = meyer::analyze(lam.fourier_table(L), lv.j0, lv.j1);
  int exceed = 0;
  for (std::uint64_t r = 0; r < 500; ++r) {
    const auto data = sample_dataset(sampler, g, n, {kSeed + 5, r}, false);
    const auto res = adaptive_estimate(data, g, extend_params());
    bool bad = false;
    for (int j = lv.j0; j <= lv.j1; ++j)
      for (long k = 0; k < (1L << j); ++k)
        if (std::abs(res.raw.detail_at(j, k) - truth.detail_at(j, k)) >
            0.5 * res.diagnostics.thresholds[static_cast<std::size_t>(j - lv.j0)])
          bad = true;
    if (bad) ++exceed;
  }
  CAPTURE(exceed);
  CHECK(exceed <= 25);
}
