// JSON configuration for intensities, shift laws, estimators and designs.
#pragma once

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "shiftpois/bench.hpp"
#include "shiftpois/model.hpp"

namespace shiftpois {

using Json = nlohmann::ordered_json;

/// {"kind": "cosine" | "poly_decay" | "piecewise_constant" | "wavelet_bump", ...}
IntensityModel parse_intensity(const Json& j);
/// {"kind": "laplace" | "sym_gamma", "sigma": ..., ["nu": ...]}
ShiftDensity parse_shift(const Json& j);
/// {"kind": "linear" | "adaptive" | "empirical_constant", ...}
EstimatorSpec parse_estimator(const Json& j);
LevelSchedule parse_schedule(const std::string& name);

/// Nominal smoothness of an intensity (s of PolyDecay / WaveletBump), if any.
std::optional<double> nominal_smoothness(const IntensityModel& lambda);

/// Top-level run configuration. Only the sections a command needs are required.
struct RunConfig {
  Json raw;
  std::string text;  // verbatim config, echoed into artifacts

  IntensityModel intensity() const;
  ShiftDensity shift() const;
  EstimatorSpec estimator() const;
  /// "n" (must be >= 1).
  std::size_t n() const;
  /// "ns", or [n] when only "n" is given.
  std::vector<std::size_t> ns() const;
  std::size_t replications(std::size_t fallback) const;
  std::optional<std::uint64_t> seed() const;
};

RunConfig parse_run_config(const std::string& text);

}  // namespace shiftpois
