#include "shiftpois/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>

#include "shiftpois/bench.hpp"
#include "shiftpois/meyer.hpp"
#include "shiftpois/model.hpp"
#include "shiftpois/oracle.hpp"
#include "shiftpois/simulate.hpp"
#include "shiftpois/spectral.hpp"
#include "shiftpois/threshold.hpp"

namespace shiftpois {

namespace {

using Check = std::function<std::string()>;  // empty string = pass

std::string fail_if(bool bad, const std::string& what, double value) {
  if (!bad) return {};
  std::ostringstream os;
  os << what << " (" << value << ")";
  return os.str();
}

std::vector<IntensityModel> shipped_intensities() {
  return {IntensityModel::cosine(2.0, 1.0), IntensityModel::poly_decay(1.5, 7),
          IntensityModel::piecewise_constant({0.0, 0.5}, {3.0, 1.0}),
          assouad_intensity(make_assouad_spec(3, {1, 0, 1, 1, 0, 0, 1, 0}, 1.5))};
}

}  // namespace

std::vector<CheckResult> run_invariants(unsigned workers) {
  std::vector<std::pair<std::string, Check>> checks;

  checks.emplace_back("intensity conjugate symmetry and mass", [] {
    double worst = 0.0;
    for (const auto& lam : shipped_intensities()) {
      worst = std::max(worst, std::abs(lam.theta(0).real() - lam.total_mass()));
      for (long l = 1; l <= 4096; l *= 2) worst = std::max(worst, std::abs(lam.theta(-l) - std::conj(lam.theta(l))));
    }
    return fail_if(worst > 1e-12, "max deviation", worst);
  });
  checks.emplace_back("intensities nonnegative on 2^14 grid", [] {
    double lo = 1e300;
    for (const auto& lam : shipped_intensities())
      for (double v : lam.eval_on_grid(1 << 14)) lo = std::min(lo, v);
    return fail_if(lo < -1e-12, "minimum", lo);
  });
  checks.emplace_back("shift decay bracket", [] {
    for (const auto& g : {ShiftDensity::laplace(0.05), ShiftDensity::sym_gamma(4.0, 0.05)}) {
      const auto [lo, hi] = g.decay_bracket();
      const double asym = std::pow(2.0 * std::numbers::pi * g.sigma(), -g.ill_posedness());
      if (!(lo > 0.0) || hi > asym * 1.01 || g.gamma(0) != 1.0) return fail_if(true, "upper constant", hi);
    }
    return std::string();
  });
  checks.emplace_back("Meyer orthonormality j <= 4", [] {
    double worst = 0.0;
    for (int j = 0; j <= 4; ++j)
      for (long k = 0; k < (1L << j); ++k) {
        double sq = 0.0;
        for (long l : meyer::omega_set(j)) sq += std::norm(meyer::wavelet_fourier_coeff(j, k, l));
        worst = std::max(worst, std::abs(sq - 1.0));
      }
    return fail_if(worst > 1e-12, "norm error", worst);
  });
  checks.emplace_back("Meyer round trip", [] {
    const auto lam = IntensityModel::poly_decay(1.5, 3, 20);  // inside the flat band of V_6
    const auto c = meyer::analyze(lam.fourier_table(60), 2, 5);
    const auto back = meyer::synthesize_fourier(c);
    double worst = 0.0;
    for (long l = -back.max_freq(); l <= back.max_freq(); ++l)
      worst = std::max(worst, std::abs(back[l] - lam.theta(l)));
    return fail_if(worst > 1e-10, "coefficient error", worst);
  });
  checks.emplace_back("Parseval on grid", [] {
    const auto t = IntensityModel::poly_decay(2.0, 5, 100).fourier_table(100);
    const auto g = synthesize_grid(t, 1 << 12).values;
    double sq = 0.0;
    for (double v : g) sq += v * v;
    sq /= static_cast<double>(g.size());
    return fail_if(std::abs(sq - t.energy()) > 1e-8, "difference", sq - t.energy());
  });
  checks.emplace_back("threshold grows with level", [] {
    const auto g = ShiftDensity::laplace(0.05);
    ThresholdParams p;
    double prev = 0.0;
    for (int j = 2; j <= 8; ++j) {
      const double s = random_threshold(j, 4096, p, g, 2.0);
      if (s < prev) return fail_if(true, "threshold drop at j", j);
      prev = s;
    }
    return std::string();
  });
  checks.emplace_back("k_tilde monotone in counts", [] {
    std::vector<long> counts(50, 2);
    const double a = k_tilde(counts, 2.0);
    counts[7] += 1;
    return fail_if(k_tilde(counts, 2.0) < a, "k_tilde", a);
  });
  checks.emplace_back("exact risk of zero filter is the energy", [] {
    const auto lam = IntensityModel::cosine(2.0, 1.0);
    const double r = linear_risk_exact(lam, ShiftDensity::laplace(0.05), Filter::from_values({0.0, 0.0, 0.0}), 100);
    return fail_if(std::abs(r - 4.5) > 1e-12, "risk", r);
  });
  checks.emplace_back("MISE of exact coefficients is zero", [] {
    const auto lam = IntensityModel::cosine(2.0, 1.0);
    return fail_if(mise(lam.fourier_table(3), lam) > 1e-14, "mise", mise(lam.fourier_table(3), lam));
  });
  checks.emplace_back("dataset determinism across workers", [workers] {
    const auto lam = IntensityModel::cosine(2.0, 1.0);
    const auto g = ShiftDensity::laplace(0.05);
    const auto a = sample_dataset(lam, g, 200, {11, 3}, true, 1);
    const auto b = sample_dataset(lam, g, 200, {11, 3}, true, std::max(workers, 2u));
    const bool same = a.trajectories == b.trajectories && a.shifts == b.shifts;
    return fail_if(!same, "mismatch", 0.0);
  });
  checks.emplace_back("Assouad bit flip geometry", [] {
    auto spec = make_assouad_spec(2, {1, 0, 1, 1}, 1.5);
    const auto a = assouad_intensity(spec);
    spec.omega[1] = 1;
    const auto b = assouad_intensity(spec);
    const double xi = spec.xi();
    const double dE = b.energy() - a.energy();
    return fail_if(std::abs(dE - xi * xi) > 1e-12, "energy change minus xi^2", dE - xi * xi);
  });
  checks.emplace_back("Girsanov ratio with zero mu", [] {
    const auto zero = IntensityModel::cosine(0.0, 0.0);
    const double v = girsanov_log_ratio({0.1, 0.5, 0.9}, 1.5, zero);
    return fail_if(v != 0.0, "log ratio", v);
  });
  checks.emplace_back("rate fit on exact power law", [] {
    std::vector<RiskCell> rows;
    for (std::size_t n : {256u, 1024u, 4096u}) rows.push_back({n, 2, 10.0 / static_cast<double>(n), 0.0, {}});
    const double s = rate_fit(rows).slope;
    return fail_if(std::abs(s + 1.0) > 1e-12, "slope", s);
  });

  std::vector<CheckResult> out;
  for (auto& [name, fn] : checks) {
    CheckResult r{name, false, {}};
    try {
      r.detail = fn();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace shiftpois
