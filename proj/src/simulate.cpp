#include "shiftpois/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "shiftpois/errors.hpp"

namespace shiftpois {

double wrap_unit(double t) noexcept {
  const double u = t - std::floor(t);
  return u >= 1.0 ? 0.0 : u;
}

std::vector<long> TrajectorySet::counts() const {
  std::vector<long> out;
  out.reserve(trajectories.size());
  for (const auto& tr : trajectories) out.push_back(static_cast<long>(tr.size()));
  return out;
}

long TrajectorySet::total_events() const noexcept {
  long total = 0;
  for (const auto& tr : trajectories) total += static_cast<long>(tr.size());
  return total;
}

void TrajectorySet::validate() const {
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto& tr = trajectories[i];
    for (std::size_t e = 0; e < tr.size(); ++e) {
      if (!(tr[e] >= 0.0 && tr[e] < 1.0))
        throw DataError("trajectory " + std::to_string(i) + ": event time outside [0, 1)");
      if (e > 0 && tr[e] < tr[e - 1])
        throw DataError("trajectory " + std::to_string(i) + ": event times not sorted");
    }
  }
  if (shifts && shifts->size() != trajectories.size())
    throw DataError("shift count does not match trajectory count");
}

IntensitySampler::IntensitySampler(const IntensityModel& lambda, std::size_t grid)
    : cdf_(lambda.cumulative_on_grid(grid)), mass_(lambda.total_mass()) {
  // Synthesis round-off can make a flat stretch dip; keep the table monotone.
  for (std::size_t k = 1; k < cdf_.size(); ++k) cdf_[k] = std::max(cdf_[k], cdf_[k - 1]);
  cdf_.back() = std::max(cdf_.back(), mass_);
}

double IntensitySampler::draw_location(Rng& rng) const {
  const double target = rng.uniform() * cdf_.back();
  // First node strictly above the target; the event lies in the cell before it.
  const auto it = std::upper_bound(cdf_.begin() + 1, cdf_.end(), target);
  const std::size_t hi = it == cdf_.end() ? cdf_.size() - 1
                                          : static_cast<std::size_t>(it - cdf_.begin());
  const std::size_t lo = hi - 1;
  const double width = cdf_[hi] - cdf_[lo];
  const double frac = width > 0.0 ? (target - cdf_[lo]) / width : 0.0;
  const double g = static_cast<double>(cdf_.size() - 1);
  return wrap_unit((static_cast<double>(lo) + frac) / g);
}

std::vector<double> IntensitySampler::draw(double tau, Rng& rng) const {
  std::vector<double> out;
  if (!(mass_ > 0.0)) return out;
  std::poisson_distribution<long> count(mass_);
  const long k = count(rng);
  out.reserve(static_cast<std::size_t>(k));
  for (long e = 0; e < k; ++e) out.push_back(wrap_unit(draw_location(rng) + tau));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sample_shifts(const ShiftDensity& g, std::size_t n, SimSeed seed) {
  if (n < 1) throw ConfigError("sample_shifts needs n >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::keyed(seed, i, StreamPurpose::shift);
    out[i] = g.sample(rng);
  }
  return out;
}

std::vector<double> sample_trajectory(const IntensityModel& lambda, double tau, SimSeed seed) {
  const IntensitySampler sampler(lambda);
  Rng rng = Rng::keyed(seed, 0, StreamPurpose::events);
  return sampler.draw(tau, rng);
}

TrajectorySet sample_dataset(const IntensitySampler& sampler, const ShiftDensity& g,
                             std::size_t n, SimSeed seed, bool keep_shifts,
                             unsigned workers) {
  if (n < 1) throw ConfigError("sample_dataset needs n >= 1");
  TrajectorySet set;
  set.trajectories.resize(n);
  std::vector<double> shifts(n);
  const auto one = [&](std::size_t i) {
    Rng srng = Rng::keyed(seed, i, StreamPurpose::shift);
    shifts[i] = g.sample(srng);
    Rng erng = Rng::keyed(seed, i, StreamPurpose::events);
    set.trajectories[i] = sampler.draw(shifts[i], erng);
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    parallel_for(n, workers, one);
  }
  if (keep_shifts) set.shifts = std::move(shifts);
  return set;
}

TrajectorySet sample_dataset(const IntensityModel& lambda, const ShiftDensity& g,
                             std::size_t n, SimSeed seed, bool keep_shifts,
                             unsigned workers) {
  return sample_dataset(IntensitySampler(lambda), g, n, seed, keep_shifts, workers);
}

}  // namespace shiftpois
