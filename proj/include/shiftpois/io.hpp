// File formats: JSON-lines trajectories, CSV tables, atomic writes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shiftpois/fourier.hpp"
#include "shiftpois/meyer.hpp"
#include "shiftpois/simulate.hpp"

namespace shiftpois {

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// "# config: {...}" and "# seed: N" lines for CSV headers.
std::string config_comment(const std::string& config_json, std::uint64_t seed);

/// Writes to a sibling temp file, then renames over `path`. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

struct TrajectoryFile {
  TrajectorySet data;
  std::string config_json;  // header config, "null" when absent
  std::uint64_t seed = 0;
};

/// Header line {"config": ..., "seed": ...}, then {"i", "events", ["shift"]} per line.
std::string trajectories_to_jsonl(const TrajectorySet& data, const std::string& config_json,
                                  std::uint64_t seed, bool keep_shifts);
TrajectoryFile trajectories_from_jsonl(const std::string& text);

/// l,re,im rows for l = -L..L.
std::string coefficients_csv(const FourierTable& table, const std::string& config_json,
                             std::uint64_t seed);
/// t,value rows on the grid k / G.
std::string estimate_csv(const std::vector<double>& values, const std::string& config_json,
                         std::uint64_t seed);
/// type,j,k,value rows.
std::string wavelet_csv(const meyer::WaveletCoefficients& coeffs,
                        const std::string& config_json, std::uint64_t seed);

}  // namespace shiftpois
