#include "shiftpois/io.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "shiftpois/errors.hpp"

namespace shiftpois {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string config_comment(const std::string& config_json, std::uint64_t seed) {
  std::string compact = "null";
  if (!config_json.empty()) compact = json::parse(config_json).dump();
  return "# config: " + compact + "\n# seed: " + std::to_string(seed) + "\n";
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string trajectories_to_jsonl(const TrajectorySet& data, const std::string& config_json,
                                  std::uint64_t seed, bool keep_shifts) {
  std::ostringstream os;
  json header;
  header["config"] = config_json.empty() ? json() : json::parse(config_json);
  header["seed"] = seed;
  os << header.dump() << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    os << "{\"i\":" << i << ",\"events\":[";
    const auto& tr = data.trajectories[i];
    for (std::size_t e = 0; e < tr.size(); ++e) os << (e ? "," : "") << format_double(tr[e]);
    os << "]";
    if (keep_shifts && data.shifts) os << ",\"shift\":" << format_double((*data.shifts)[i]);
    os << "}\n";
  }
  return os.str();
}

TrajectoryFile trajectories_from_jsonl(const std::string& text) {
  TrajectoryFile out;
  out.config_json = "null";
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool all_shifts = true;
  std::vector<double> shifts;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (j.contains("config") && !j.contains("events")) {
      out.config_json = j["config"].dump();
      out.seed = j.value("seed", std::uint64_t{0});
      continue;
    }
    if (!j.contains("events") || !j["events"].is_array())
      throw DataError("line " + std::to_string(lineno) + ": missing \"events\" array");
    const std::size_t idx = j.value("i", out.data.size());
    if (idx != out.data.size())
      throw DataError("line " + std::to_string(lineno) + ": trajectory index out of order");
    try {
      out.data.trajectories.push_back(j["events"].get<std::vector<double>>());
      if (j.contains("shift")) {
        shifts.push_back(j["shift"].get<double>());
      } else {
        all_shifts = false;
      }
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (all_shifts && !shifts.empty()) out.data.shifts = std::move(shifts);
  out.data.validate();
  return out;
}

std::string coefficients_csv(const FourierTable& table, const std::string& config_json,
                             std::uint64_t seed) {
  std::ostringstream os;
  os << config_comment(config_json, seed) << "l,re,im\n";
  for (long l = -table.max_freq(); l <= table.max_freq(); ++l)
    os << l << ',' << format_double(table[l].real()) << ',' << format_double(table[l].imag()) << "\n";
  return os.str();
}

std::string estimate_csv(const std::vector<double>& values, const std::string& config_json,
                         std::uint64_t seed) {
  std::ostringstream os;
  os << config_comment(config_json, seed) << "t,value\n";
  const double g = static_cast<double>(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    os << format_double(static_cast<double>(k) / g) << ',' << format_double(values[k]) << "\n";
  return os.str();
}

std::string wavelet_csv(const meyer::WaveletCoefficients& coeffs,
                        const std::string& config_json, std::uint64_t seed) {
  std::ostringstream os;
  os << config_comment(config_json, seed) << "type,j,k,value\n";
  for (std::size_t k = 0; k < coeffs.scaling.size(); ++k)
    os << "scaling," << coeffs.j0 << ',' << k << ',' << format_double(coeffs.scaling[k]) << "\n";
  for (int j = coeffs.j0; j <= coeffs.j1; ++j) {
    const auto& row = coeffs.detail[static_cast<std::size_t>(j - coeffs.j0)];
    for (std::size_t k = 0; k < row.size(); ++k)
      os << "detail," << j << ',' << k << ',' << format_double(row[k]) << "\n";
  }
  return os.str();
}

}  // namespace shiftpois
