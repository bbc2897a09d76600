#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussdev/bodies.hpp"
#include "gaussdev/mc.hpp"

namespace gaussdev::cli {

using json = nlohmann::ordered_json;

struct FunctionConfig {
  std::string family = "lp_norm";
  double p = 2.0;                 // lp_norm; infinity allowed ("inf" in the file)
  std::size_t n = 64;
  std::vector<double> direction;  // linear_functional; empty means e1
  std::size_t facets = 200;       // polytope_gauge
  std::uint64_t facet_seed = 7;
  std::string gp = "brownian";    // gp_sup: only the Brownian grid is built in
  std::size_t m = 256;
  double horizon = 1.0;
  bool negate = false;            // use -f (a concave function)
};

struct JLConfig {
  FunctionConfig target{"lp_norm", 2.0, 32};
  std::size_t source_dim = 100;
  std::size_t n_points = 16;
  std::string points = "sphere";  // sphere | gaussian | path to a CSV file
  std::size_t trials = 200;
  std::string mode = "i";
  double delta = 0.5;
  double epsilon = 0.25;
  double capacity_target = 1e-3;
  std::size_t scale_samples = 1000000;
};

struct ExperimentConfig {
  std::string suite = "deviation";
  std::vector<FunctionConfig> functions;
  std::string dist = "gaussian";  // gaussian | exponential | chi_squared
  std::size_t dof = 1;            // chi_squared degrees of freedom
  std::size_t samples = 1000000;
  std::vector<double> grid;       // t grid (deviation) or epsilon grid (smallball, gp)
  std::vector<std::string> bounds;
  std::vector<double> q;          // negmoments
  double C = 8.0;
  double c = 0.5;
  std::optional<double> kv_c;     // free constant for the kv bound; reported only if absent
  std::uint64_t seed = 20240501;
  unsigned workers = 1;
  double confidence = 0.99;
  bool cross_fit = false;
  SummaryOptions summary;
  JLConfig jl;
  std::string output;             // empty: stdout
  std::string format = "json";
};

// Suite defaults, everything explicit.
ExperimentConfig default_config(const std::string& suite);
// Missing keys take the suite defaults; unknown keys and bad values throw
// ConfigError.
ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& c, bool include_runtime = true);
ExperimentConfig load_config(const std::string& path);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

FunctionDescriptor build_function(const FunctionConfig& fc, std::uint64_t seed);
json to_json(const FunctionConfig& fc);

struct CurveTable {
  std::string name;
  std::vector<double> threshold, p_hat, ci_low, ci_high, bound, margin;
};

struct Report {
  json payload;  // deterministic in (config, seed)
  json meta;     // runtime, ISA, version, workers
  std::vector<CurveTable> curves;
  int status = 0;  // 0 PASS, 2 FAIL, 3 refused
};

Report run(const ExperimentConfig& config);

// JSON: one document {"payload", "meta"}. CSV: one file per curve named
// <out-stem>.<curve>.csv. Throws on an unwritable path.
void emit(const Report& report, const std::string& format, const std::string& path);
std::string dump_json(const Report& report);

// Rounds to 12 significant digits; non-finite values become null and values
// below 1e-300 in magnitude become {"log10_value": ...} when a log is given.
json number(double v);
json probability(double v, double log10_value);

}  // namespace gaussdev::cli
