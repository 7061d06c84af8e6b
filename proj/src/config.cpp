#include "shiftpois/config.hpp"

#include <algorithm>

#include "shiftpois/errors.hpp"
#include "shiftpois/oracle.hpp"

namespace shiftpois {

namespace {

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string(where) + ": missing field \"" + key + "\"");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key, const char* where) {
  try {
    return field(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(where) + ": bad field \"" + key + "\": " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const char* where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key, where);
}

std::size_t positive_size(const Json& j, const char* key, const char* where) {
  const auto& v = field(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(std::string(where) + ": \"" + key + "\" must be an integer >= 1");
  return v.get<std::size_t>();
}

}  // namespace

IntensityModel parse_intensity(const Json& j) {
  const auto kind = get<std::string>(j, "kind", "intensity");
  if (kind == "cosine") return IntensityModel::cosine(get<double>(j, "a", "intensity"), get<double>(j, "b", "intensity"));
  if (kind == "poly_decay")
    return IntensityModel::poly_decay(get<double>(j, "s", "intensity"),
                                      get_or<std::uint64_t>(j, "phase_seed", 0, "intensity"),
                                      get_or<long>(j, "terms", 1024, "intensity"),
                                      get_or<double>(j, "min_a", 0.0, "intensity"));
  if (kind == "piecewise_constant")
    return IntensityModel::piecewise_constant(get<std::vector<double>>(j, "breakpoints", "intensity"),
                                              get<std::vector<double>>(j, "levels", "intensity"));
  if (kind == "wavelet_bump") {
    const int D = get<int>(j, "D", "intensity");
    const auto bits = get<std::vector<int>>(j, "omega", "intensity");
    std::vector<std::uint8_t> omega;
    for (int b : bits) {
      if (b != 0 && b != 1) throw ConfigError("intensity: omega entries must be 0 or 1");
      omega.push_back(static_cast<std::uint8_t>(b));
    }
    if (D < 0 || D > 12) throw ConfigError("intensity: D must lie in [0, 12]");
    if (omega.size() != (std::size_t{1} << D)) throw ConfigError("intensity: omega must have 2^D entries");
    AssouadSpec spec = make_assouad_spec(D, omega, get<double>(j, "s", "intensity"),
                                         get_or<double>(j, "A", 2.0, "intensity"));
    if (j.contains("c_psi")) {
      spec.c_psi = get<double>(j, "c_psi", "intensity");
      spec.c = spec.A / (2.0 + spec.c_psi);
    }
    spec.c = get_or<double>(j, "c", spec.c, "intensity");
    return assouad_intensity(spec);
  }
  throw ConfigError("intensity: unknown kind \"" + kind + "\"");
}

ShiftDensity parse_shift(const Json& j) {
  const auto kind = get<std::string>(j, "kind", "shift");
  if (kind == "laplace") return ShiftDensity::laplace(get<double>(j, "sigma", "shift"));
  if (kind == "sym_gamma")
    return ShiftDensity::sym_gamma(get<double>(j, "nu", "shift"), get<double>(j, "sigma", "shift"));
  throw ConfigError("shift: unknown kind \"" + kind + "\"");
}

LevelSchedule parse_schedule(const std::string& name) {
  if (name == "strict") return LevelSchedule::strict;
  if (name == "extend") return LevelSchedule::extend_finest;
  throw ConfigError("levels must be \"strict\" or \"extend\"");
}

EstimatorSpec parse_estimator(const Json& j) {
  const auto kind = get<std::string>(j, "kind", "estimator");
  if (kind == "linear") {
    LinearCutoff lin;
    if (j.contains("M")) {
      const long M = get<long>(j, "M", "estimator");
      if (M < 0) throw ConfigError("estimator: M must be >= 0");
      lin.M = M;
    } else {
      lin.s = get<double>(j, "s", "estimator");
    }
    return lin;
  }
  if (kind == "adaptive") {
    Adaptive a;
    a.params.gamma = get_or<double>(j, "gamma", 2.0, "estimator");
    a.params.delta = get_or<double>(j, "delta", 1.0, "estimator");
    a.params.clip_negative = get_or<bool>(j, "clip", false, "estimator");
    a.params.schedule = parse_schedule(get_or<std::string>(j, "levels", "strict", "estimator"));
    a.params.validate();
    return a;
  }
  if (kind == "empirical_constant") return EmpiricalConstant{};
  throw ConfigError("estimator: unknown kind \"" + kind + "\"");
}

std::optional<double> nominal_smoothness(const IntensityModel& lambda) {
  if (const auto* p = std::get_if<PolyDecay>(&lambda.kind())) return p->s;
  if (const auto* w = std::get_if<WaveletBump>(&lambda.kind())) return w->s;
  return std::nullopt;
}

IntensityModel RunConfig::intensity() const { return parse_intensity(field(raw, "intensity", "config")); }
ShiftDensity RunConfig::shift() const { return parse_shift(field(raw, "shift", "config")); }
EstimatorSpec RunConfig::estimator() const { return parse_estimator(field(raw, "estimator", "config")); }

std::size_t RunConfig::n() const { return positive_size(raw, "n", "config"); }

std::vector<std::size_t> RunConfig::ns() const {
  if (!raw.contains("ns")) return {n()};
  const auto& arr = raw.at("ns");
  if (!arr.is_array() || arr.empty()) throw ConfigError("config: \"ns\" must be a nonempty array");
  std::vector<std::size_t> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<long long>() < 1)
      throw ConfigError("config: every entry of \"ns\" must be an integer >= 1");
    out.push_back(v.get<std::size_t>());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t RunConfig::replications(std::size_t fallback) const {
  if (!raw.contains("R")) return fallback;
  const std::size_t R = positive_size(raw, "R", "config");
  if (R < 2) throw ConfigError("config: \"R\" must be >= 2");
  return R;
}

std::optional<std::uint64_t> RunConfig::seed() const {
  if (!raw.contains("seed")) return std::nullopt;
  return get<std::uint64_t>(raw, "seed", "config");
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig rc;
  try {
    rc.raw = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!rc.raw.is_object()) throw ConfigError("config must be a JSON object");
  rc.text = rc.raw.dump();
  return rc;
}

}  // namespace shiftpois
