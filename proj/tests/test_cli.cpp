#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>

#include "shiftpois/cli.hpp"
#include "shiftpois/config.hpp"
#include "shiftpois/io.hpp"
#include "shiftpois/threshold.hpp"

using namespace shiftpois;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) {
    dir = fs::temp_directory_path() / ("shiftpois_cli_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string put(const std::string& file, const std::string& text) const {
    write_file_atomic(dir / file, text);
    return (dir / file).string();
  }
  std::string path(const std::string& p) const { return (dir / p).string(); }
  std::string read(const std::string& p) const { return read_file(dir / p); }
};

const char* kSimConfig = R"({
  "intensity": {"kind": "cosine", "a": 2.0, "b": 1.0},
  "shift": {"kind": "laplace", "sigma": 0.05},
  "estimator": {"kind": "adaptive", "levels": "extend"},
  "n": 3000,
  "seed": 99
})";

}  // namespace

TEST_CASE("help and usage errors") {
  auto r = call({"--help"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("simulate") != std::string::npos);
  CHECK(r.out.find("lower-bound-demo") != std::string::npos);
  CHECK(call({}).code == cli::kExitConfig);
  CHECK(call({"frobnicate"}).code == cli::kExitConfig);
  CHECK(call({"simulate", "--bogus"}).code == cli::kExitConfig);
}

TEST_CASE("exit codes") {
  Scratch s("codes");
  SUBCASE("n = 0 is a config error") {
    const auto cfg = s.put("c.json", R"({"intensity": {"kind": "cosine", "a": 1, "b": 0},
                                          "shift": {"kind": "laplace", "sigma": 0.1}, "n": 0})");
    const auto r = call({"simulate", "--config", cfg, "--out", s.dir.string()});
    CHECK(r.code == cli::kExitConfig);
    CHECK(r.err.find("\"n\"") != std::string::npos);
  }
  SUBCASE("missing --config") { CHECK(call({"simulate", "--out", s.dir.string()}).code == cli::kExitConfig); }
  SUBCASE("bad JSON") {
    const auto cfg = s.put("c.json", "{not json");
    CHECK(call({"simulate", "--config", cfg}).code == cli::kExitConfig);
  }
  SUBCASE("unreadable config") {
    CHECK(call({"simulate", "--config", s.path("nope.json")}).code == cli::kExitIo);
  }
  SUBCASE("unwritable output") {
    const auto cfg = s.put("c.json", kSimConfig);
    s.put("blocker", "x");
    CHECK(call({"simulate", "--config", cfg, "--out", s.path("blocker/sub")}).code == cli::kExitIo);
  }
  SUBCASE("schedule error") {
    const auto cfg = s.put("c.json", R"({"intensity": {"kind": "cosine", "a": 2, "b": 1},
                                          "shift": {"kind": "laplace", "sigma": 0.05}, "n": 300, "seed": 1})");
    REQUIRE(call({"simulate", "--config", cfg, "--out", s.dir.string()}).code == cli::kExitOk);
    const auto r = call({"estimate", "--data", s.path("trajectories.jsonl"), "--out", s.dir.string()});
    CHECK(r.code == cli::kExitSchedule);
    CHECK(r.err.find("sample too small") != std::string::npos);
    CHECK(call({"estimate", "--data", s.path("trajectories.jsonl"), "--out", s.dir.string(), "--levels", "extend"})
              .code == cli::kExitOk);
  }
  SUBCASE("malformed data") {
    const auto data = s.put("bad.jsonl", "{\"config\": null, \"seed\": 1}\n{\"i\": 0, \"events\": [0.5, 0.2]}\n");
    const auto cfg = s.put("c.json", kSimConfig);
    CHECK(call({"estimate", "--config", cfg, "--data", data}).code == cli::kExitData);
    const auto junk = s.put("junk.jsonl", "hello\n");
    CHECK(call({"estimate", "--config", cfg, "--data", junk}).code == cli::kExitData);
    const auto strings = s.put("str.jsonl", "{\"i\": 0, \"events\": [\"a\"]}\n");
    CHECK(call({"estimate", "--config", cfg, "--data", strings}).code == cli::kExitData);
  }
  SUBCASE("invalid threshold parameters") {
    const auto cfg = s.put("c.json", kSimConfig);
    REQUIRE(call({"simulate", "--config", cfg, "--out", s.dir.string()}).code == 0);
    CHECK(call({"estimate", "--data", s.path("trajectories.jsonl"), "--gamma", "1.5"}).code == cli::kExitConfig);
    CHECK(call({"estimate", "--data", s.path("trajectories.jsonl"), "--grid", "1000"}).code == cli::kExitConfig);
    CHECK(call({"linear-estimate", "--data", s.path("trajectories.jsonl"), "--M", "-1"}).code == cli::kExitConfig);
  }
}

TEST_CASE("simulate then estimate matches the in-process estimator") {
  Scratch s("pipeline");
  const auto cfg = s.put("c.json", kSimConfig);
  REQUIRE(call({"simulate", "--config", cfg, "--out", s.dir.string(), "--workers", "3"}).code == 0);
  const auto traj = s.read("trajectories.jsonl");
  REQUIRE(call({"simulate", "--config", cfg, "--out", s.dir.string(), "--workers", "1"}).code == 0);
  CHECK(s.read("trajectories.jsonl") == traj);

  const auto r = call({"estimate", "--data", s.path("trajectories.jsonl"), "--out", s.dir.string()});
  REQUIRE(r.code == 0);

  const auto rc = parse_run_config(kSimConfig);
  const auto data = sample_dataset(rc.intensity(), rc.shift(), rc.n(), {99, 0}, false);
  const auto est = std::get<Adaptive>(rc.estimator());
  const auto res = adaptive_estimate(data, rc.shift(), est.params);
  CHECK(s.read("coefficients.csv") == coefficients_csv(res.estimate.coefficients, rc.text, 99));
  CHECK(s.read("estimate.csv") == estimate_csv(res.estimate.on_grid(1024).values, rc.text, 99));
  CHECK(s.read("wavelets.csv") == wavelet_csv(res.kept, rc.text, 99));

  const auto diag = nlohmann::json::parse(s.read("diagnostics.json"));
  CHECK(diag["j0"] == res.diagnostics.levels.j0);
  CHECK(diag["j1"] == res.diagnostics.levels.j1);
  CHECK(diag["kept"].get<std::vector<long>>() == res.diagnostics.kept);
  CHECK(diag["thresholds"].get<std::vector<double>>() == res.diagnostics.thresholds);
  CHECK(diag["config"]["n"] == 3000);
  CHECK(diag["seed"] == 99);

  // Second run, same bytes.
  const std::string first = s.read("estimate.csv") + s.read("diagnostics.json") + s.read("wavelets.csv");
  REQUIRE(call({"estimate", "--data", s.path("trajectories.jsonl"), "--out", s.dir.string(), "--workers", "2"}).code == 0);
  CHECK(s.read("estimate.csv") + s.read("diagnostics.json") + s.read("wavelets.csv") == first);

  REQUIRE(call({"linear-estimate", "--data", s.path("trajectories.jsonl"), "--out", s.dir.string(), "--M", "2"}).code == 0);
  CHECK(s.read("linear_coefficients.csv") ==
        coefficients_csv(linear_estimate(data, rc.shift(), 2).coefficients, rc.text, 99));
  CHECK(s.read("linear_estimate.csv").rfind("# config: ", 0) == 0);
}

TEST_CASE("trajectory file carries config, seed and optional shifts") {
  Scratch s("traj");
  const auto cfg = s.put("c.json", kSimConfig);
  REQUIRE(call({"simulate", "--config", cfg, "--out", s.dir.string(), "--seed", "5", "--keep-shifts"}).code == 0);
  const auto file = trajectories_from_jsonl(s.read("trajectories.jsonl"));
  CHECK(file.seed == 5);
  CHECK(nlohmann::json::parse(file.config_json)["n"] == 3000);
  CHECK(file.data.size() == 3000);
  REQUIRE(file.data.shifts.has_value());
  const auto rc = parse_run_config(kSimConfig);
  CHECK(*file.data.shifts == sample_shifts(rc.shift(), 3000, {5, 0}));
}

TEST_CASE("risk-bench on the exact-risk design") {
  Scratch s("risk");
  const auto cfg = s.put("c.json", R"({
    "intensity": {"kind": "cosine", "a": 2.0, "b": 1.0},
    "shift": {"kind": "laplace", "sigma": 0.05},
    "estimator": {"kind": "linear", "M": 1},
    "ns": [256, 64],
    "R": 600,
    "seed": 3
  })");
  const auto r = call({"risk-bench", "--config", cfg, "--out", s.dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("exact risk within 3 stderr in every row") != std::string::npos);
  const auto j = nlohmann::json::parse(s.read("risk.json"));
  CHECK(j["config"]["R"] == 600);
  CHECK(j["seed"] == 3);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["n"] == 64);
  for (const auto& row : j["rows"]) CHECK(std::abs(row["z"].get<double>()) <= 3.0);
  CHECK(s.read("risk.csv").rfind("# config: ", 0) == 0);
  CHECK(s.read("risk.dat").find("\n256 ") != std::string::npos);
}

TEST_CASE("rate-check with exact risks") {
  Scratch s("rate");
  const auto cfg = s.put("c.json", R"({
    "intensity": {"kind": "poly_decay", "s": 1.5, "phase_seed": 21},
    "shift": {"kind": "laplace", "sigma": 0.5},
    "estimator": {"kind": "linear", "s": 1.5},
    "ns": [256, 1024, 4096, 16384, 65536],
    "monte_carlo": false
  })");
  REQUIRE(call({"rate-check", "--config", cfg, "--out", s.dir.string()}).code == 0);
  const auto j = nlohmann::json::parse(s.read("rate.json"));
  CHECK(j["theoretical_slope"].get<double>() == doctest::Approx(-0.375));
  CHECK(std::abs(j["fitted_slope"].get<double>() + 0.375) <= 0.15);
  CHECK(j["rows"].size() == 5);
}

TEST_CASE("lower-bound demo and selftest") {
  Scratch s("demo");
  const auto r = call({"lower-bound-demo", "--D", "1", "--n", "256", "--R", "2", "--out", s.dir.string(), "--seed", "4"});
  REQUIRE(r.code == 0);
  const auto csv = s.read("lower_bound.csv");
  CHECK(csv.find("hypothesis,omega,mise_mean,mise_stderr\n0,00,") != std::string::npos);
  CHECK(csv.find("\n3,11,") != std::string::npos);
  CHECK(csv.find("# seed: 4\n") != std::string::npos);
  CHECK(call({"lower-bound-demo", "--D", "6"}).code == cli::kExitConfig);

  const auto st = call({"selftest", "--workers", "2"});
  CHECK(st.code == 0);
  CHECK(st.out.find("all checks passed") != std::string::npos);
}
