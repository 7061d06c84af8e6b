// Randomly shifted Poisson trajectories with keyed, order-free randomness.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "shiftpois/model.hpp"
#include "shiftpois/rng.hpp"

namespace shiftpois {

/// n observed processes on [0, 1); shifts kept only for diagnostics.
struct TrajectorySet {
  std::vector<std::vector<double>> trajectories;
  std::optional<std::vector<double>> shifts;

  std::size_t size() const noexcept { return trajectories.size(); }
  std::vector<long> counts() const;
  long total_events() const noexcept;
  /// Throws DataError unless every trajectory is sorted and inside [0, 1)
  /// and shifts (if any) match the trajectory count.
  void validate() const;
};

inline constexpr std::size_t kSamplerGrid = std::size_t{1} << 16;

/// Inverse-CDF sampler for lambda / ||lambda||_1 on a cumulative table.
class IntensitySampler {
public:
  explicit IntensitySampler(const IntensityModel& lambda,
                            std::size_t grid = kSamplerGrid);

  double total_mass() const noexcept { return mass_; }
  /// One event location of the unshifted intensity.
  double draw_location(Rng& rng) const;
  /// Poisson count, then locations shifted by tau mod 1, sorted.
  std::vector<double> draw(double tau, Rng& rng) const;

private:
  std::vector<double> cdf_;  // nondecreasing, cdf_.front() = 0, back() = mass
  double mass_ = 0.0;
};

std::vector<double> sample_shifts(const ShiftDensity& g, std::size_t n, SimSeed seed);

/// Single trajectory with shift tau, drawn from the event stream of item 0.
std::vector<double> sample_trajectory(const IntensityModel& lambda, double tau,
                                      SimSeed seed);

/// Trajectory i uses shift stream (seed, i, shift) and event stream
/// (seed, i, events), so the shifts equal sample_shifts(g, n, seed).
TrajectorySet sample_dataset(const IntensitySampler& sampler, const ShiftDensity& g,
                             std::size_t n, SimSeed seed, bool keep_shifts = true,
                             unsigned workers = 1);
TrajectorySet sample_dataset(const IntensityModel& lambda, const ShiftDensity& g,
                             std::size_t n, SimSeed seed, bool keep_shifts = true,
                             unsigned workers = 1);

/// Wraps t into [0, 1).
double wrap_unit(double t) noexcept;

}  // namespace shiftpois
