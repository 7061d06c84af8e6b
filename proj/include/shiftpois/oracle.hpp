// Poisson likelihood ratios and the wavelet-bump hypothesis cube.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "shiftpois/model.hpp"
#include "shiftpois/simulate.hpp"

namespace shiftpois {

/// Level D hypothesis: A/2 + xi_D sum_k omega_k psi_{D,k} + xi_D 2^{D/2} c_psi.
struct AssouadSpec {
  int D = 0;
  std::vector<std::uint8_t> omega;
  double s = 1.0;
  double c = 0.0;  // 0 < c <= A / (2 + c_psi)
  double A = 2.0;
  double c_psi = 0.0;

  double xi() const noexcept;
  /// m_D = 2^{D/2} xi_D.
  double m() const noexcept;
  void validate() const;
};

inline constexpr int kCpsiLevel = 8;
inline constexpr int kCpsiTrials = 32;
inline constexpr std::uint64_t kCpsiSeed = 0x5eed0c75;

/// 1.1 x sup_bound_constant(8, 32, fixed seed); computed once.
double default_c_psi();

/// Spec with c = A / (2 + c_psi) and c_psi = default_c_psi().
AssouadSpec make_assouad_spec(int D, std::vector<std::uint8_t> omega, double s, double A = 2.0);

/// Throws ConfigError if the intensity dips below 0 on a 2^{D+8} grid.
IntensityModel assouad_intensity(const AssouadSpec& spec);

/// -int mu + sum_T ln(1 + mu(T - tau) / rho).
double girsanov_log_ratio(const std::vector<double>& events, double rho,
                          const IntensityModel& mu, double tau = 0.0);
/// Sum over trajectories; shifts default to 0 when absent.
double girsanov_log_ratio(const TrajectorySet& data, double rho, const IntensityModel& mu);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

using PathFunctional = std::function<double(const std::vector<double>&)>;

struct ChangeOfMeasure {
  MeanEstimate lhs;  // E_{H1}[F] by direct simulation under rho + mu
  MeanEstimate rhs;  // E_{H0}[F Lambda] under constant rho
};

ChangeOfMeasure change_of_measure_check(const PathFunctional& F, double rho,
                                        const IntensityModel& mu, std::size_t R,
                                        std::uint64_t seed, unsigned workers = 1);

/// E_{H0}[Lambda] over R trajectories of constant intensity rho.
MeanEstimate likelihood_ratio_mean(double rho, const IntensityModel& mu, std::size_t R,
                                   std::uint64_t seed, unsigned workers = 1);

struct AssouadSchedulePoint {
  std::size_t n = 0;
  double D = 0.0;  // log2(n) / (2s + 2nu + 1), kept real
  double m = 0.0;
  double n_m3 = 0.0;
};

std::vector<AssouadSchedulePoint> assouad_schedule(const std::vector<std::size_t>& ns,
                                                   double s, double nu, double c);

struct LowerBoundDemoSpec {
  int D = 3;
  double s = 5.5;
  double nu = 2.0;
  std::size_t n = 4096;
  std::size_t R = 20;
  double A = 2.0;
  double sigma = 0.05;
  std::size_t hypotheses = 16;  // all 2^{2^D} when that is smaller
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct HypothesisRisk {
  std::size_t index = 0;
  std::vector<std::uint8_t> omega;
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Adaptive-estimator risk under each sampled cube vertex (illustrative; D <= 4).
std::vector<HypothesisRisk> lower_bound_demo(const LowerBoundDemoSpec& spec);

}  // namespace shiftpois
