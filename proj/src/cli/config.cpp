#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "gaussdev/cli.hpp"

namespace gaussdev::cli {
namespace {

std::vector<double> arange(double lo, double hi, double step) {
  std::vector<double> v;
  for (int i = 0;; ++i) {
    const double x = lo + step * i;
    if (x > hi + 1e-12) break;
    v.push_back(std::round(x * 1e12) / 1e12);
  }
  return v;
}

FunctionConfig lp(double p, std::size_t n) {
  FunctionConfig f;
  f.family = "lp_norm";
  f.p = p;
  f.n = n;
  return f;
}

FunctionConfig named(const std::string& family, std::size_t n) {
  FunctionConfig f;
  f.family = family;
  f.n = n;
  return f;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string> kSuites{"deviation", "smallball", "params", "negmoments", "gp", "jl", "calibration"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void get(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

double parse_p(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    throw ConfigError("p must be a number >= 1 or \"inf\"");
  }
  if (!v.is_number()) throw ConfigError("p must be a number >= 1 or \"inf\"");
  return v.get<double>();
}

FunctionConfig function_from_json(const json& j) {
  static const std::set<std::string> keys{"family", "p", "n", "direction", "facets", "facet_seed",
                                          "gp", "m", "horizon", "negate"};
  check_keys(j, keys, "function");
  FunctionConfig f;
  get(j, "family", f.family, "function");
  if (j.contains("p")) f.p = parse_p(j["p"]);
  get(j, "n", f.n, "function");
  get(j, "direction", f.direction, "function");
  get(j, "facets", f.facets, "function");
  get(j, "facet_seed", f.facet_seed, "function");
  get(j, "gp", f.gp, "function");
  get(j, "m", f.m, "function");
  get(j, "horizon", f.horizon, "function");
  get(j, "negate", f.negate, "function");
  return f;
}

}  // namespace

json to_json(const FunctionConfig& f) {
  json j{{"family", f.family}};
  if (f.family == "lp_norm") j["p"] = std::isinf(f.p) ? json("inf") : json(f.p);
  if (f.family == "polytope_gauge") {
    j["n"] = f.n;
    j["facets"] = f.facets;
    j["facet_seed"] = f.facet_seed;
  } else if (f.family == "gp_sup") {
    j["gp"] = f.gp;
    j["m"] = f.m;
    j["horizon"] = f.horizon;
  } else if (f.family != "logconvex_1d") {
    j["n"] = f.n;
  }
  if (f.family == "linear_functional" && !f.direction.empty()) j["direction"] = f.direction;
  if (f.negate) j["negate"] = true;
  return j;
}

ExperimentConfig default_config(const std::string& suite) {
  if (!kSuites.contains(suite)) throw ConfigError("unknown suite '" + suite + "'");
  ExperimentConfig c;
  c.suite = suite;
  if (suite == "deviation") {
    FunctionConfig poly = named("polytope_gauge", 32);
    FunctionConfig gp = named("gp_sup", 0);
    c.functions = {lp(1, 64), lp(2, 64), lp(4, 64), lp(kInf, 64), named("linear_functional", 1), poly, gp};
    c.grid = arange(0.25, 6.0, 0.25);
    c.bounds = {"gaussian_median", "gaussian_variance", "gaussian_mean_clt"};
  } else if (suite == "smallball") {
    c.functions = {lp(2, 64), named("polytope_gauge", 32)};
    c.grid = {0.1, 0.2, 0.3, 0.4};
    c.bounds = {"beta_gaussian"};
  } else if (suite == "params") {
    c.functions = {lp(1, 64), lp(2, 64), lp(4, 64), lp(kInf, 64), named("polytope_gauge", 32)};
  } else if (suite == "negmoments") {
    c.functions = {lp(2, 64)};
    c.q = {1, 2, 4, 8, 16, 32};
  } else if (suite == "gp") {
    c.functions = {named("gp_sup", 0)};
    c.grid = {0.1, 0.2, 0.3, 0.4};
    c.bounds = {"gp_sup"};
  } else if (suite == "jl") {
    c.functions = {};
  } else if (suite == "calibration") {
    c.functions = {named("linear_functional", 1)};
    c.grid = arange(0.25, 3.0, 0.25);
  }
  return c;
}

ExperimentConfig config_from_json(const json& j) {
  static const std::set<std::string> keys{"suite", "functions", "dist", "dof", "samples", "grid", "bounds",
                                          "q", "C", "c", "kv_c", "seed", "workers", "confidence",
                                          "cross_fit", "summary", "jl", "output", "format"};
  check_keys(j, keys, "config");
  if (!j.contains("suite")) throw ConfigError("config: missing 'suite'");
  ExperimentConfig c = default_config(j["suite"].get<std::string>());
  if (j.contains("functions")) {
    if (!j["functions"].is_array()) throw ConfigError("config.functions: expected an array");
    c.functions.clear();
    for (const auto& f : j["functions"]) c.functions.push_back(function_from_json(f));
  }
  get(j, "dist", c.dist, "config");
  get(j, "dof", c.dof, "config");
  get(j, "samples", c.samples, "config");
  get(j, "grid", c.grid, "config");
  get(j, "bounds", c.bounds, "config");
  get(j, "q", c.q, "config");
  get(j, "C", c.C, "config");
  get(j, "c", c.c, "config");
  if (j.contains("kv_c") && !j["kv_c"].is_null()) c.kv_c = j["kv_c"].get<double>();
  get(j, "seed", c.seed, "config");
  get(j, "workers", c.workers, "config");
  get(j, "confidence", c.confidence, "config");
  get(j, "cross_fit", c.cross_fit, "config");
  get(j, "output", c.output, "config");
  get(j, "format", c.format, "config");
  if (j.contains("summary")) {
    const auto& s = j["summary"];
    check_keys(s, {"bootstrap_resamples", "slope_window_exponent", "weak_l1_grid", "min_samples"}, "summary");
    get(s, "bootstrap_resamples", c.summary.bootstrap_resamples, "summary");
    get(s, "slope_window_exponent", c.summary.slope_window_exponent, "summary");
    get(s, "weak_l1_grid", c.summary.weak_l1_grid, "summary");
    get(s, "min_samples", c.summary.min_samples, "summary");
  }
  if (j.contains("jl")) {
    const auto& s = j["jl"];
    check_keys(s, {"target", "source_dim", "n_points", "points", "trials", "mode", "delta", "epsilon",
                   "capacity_target", "scale_samples"},
               "jl");
    if (s.contains("target")) c.jl.target = function_from_json(s["target"]);
    get(s, "source_dim", c.jl.source_dim, "jl");
    get(s, "n_points", c.jl.n_points, "jl");
    get(s, "points", c.jl.points, "jl");
    get(s, "trials", c.jl.trials, "jl");
    get(s, "mode", c.jl.mode, "jl");
    get(s, "delta", c.jl.delta, "jl");
    get(s, "epsilon", c.jl.epsilon, "jl");
    get(s, "capacity_target", c.jl.capacity_target, "jl");
    get(s, "scale_samples", c.jl.scale_samples, "jl");
  }
  if (c.dist != "gaussian" && c.dist != "exponential" && c.dist != "chi_squared")
    throw ConfigError("config.dist: unknown distribution '" + c.dist + "'");
  if (c.format != "json" && c.format != "csv") throw ConfigError("config.format must be json or csv");
  if (!(c.confidence > 0.0 && c.confidence < 1.0)) throw ConfigError("config.confidence must lie in (0, 1)");
  c.summary.confidence = c.confidence;
  return c;
}

json to_json(const ExperimentConfig& c, bool include_runtime) {
  json fs = json::array();
  for (const auto& f : c.functions) fs.push_back(to_json(f));
  json j{{"suite", c.suite},
         {"functions", fs},
         {"dist", c.dist},
         {"dof", c.dof},
         {"samples", c.samples},
         {"grid", c.grid},
         {"bounds", c.bounds},
         {"q", c.q},
         {"C", c.C},
         {"c", c.c},
         {"kv_c", c.kv_c ? json(*c.kv_c) : json(nullptr)},
         {"seed", c.seed},
         {"confidence", c.confidence},
         {"cross_fit", c.cross_fit},
         {"summary",
          {{"bootstrap_resamples", c.summary.bootstrap_resamples},
           {"slope_window_exponent", c.summary.slope_window_exponent},
           {"weak_l1_grid", c.summary.weak_l1_grid},
           {"min_samples", c.summary.min_samples}}},
         {"jl",
          {{"target", to_json(c.jl.target)},
           {"source_dim", c.jl.source_dim},
           {"n_points", c.jl.n_points},
           {"points", c.jl.points},
           {"trials", c.jl.trials},
           {"mode", c.jl.mode},
           {"delta", c.jl.delta},
           {"epsilon", c.jl.epsilon},
           {"capacity_target", c.jl.capacity_target},
           {"scale_samples", c.jl.scale_samples}}}};
  // Worker count and output location do not affect results.
  if (include_runtime) {
    j["workers"] = c.workers;
    j["output"] = c.output;
    j["format"] = c.format;
  }
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

FunctionDescriptor build_function(const FunctionConfig& fc, std::uint64_t seed) {
  BuiltinParams bp;
  bp.n = fc.n;
  bp.p = fc.p;
  bp.direction = fc.direction;
  if (fc.family == "polytope_gauge") {
    if (fc.n == 0 || fc.facets == 0) throw ConfigError("polytope_gauge needs n and facets");
    bp.facets = random_facets(fc.n, fc.facets, StreamSpec{seed, fc.facet_seed});
  }
  if (fc.family == "gp_sup") {
    if (fc.gp != "brownian") throw ConfigError("gp_sup: unknown process '" + fc.gp + "'");
    bp.gp = GPSpec::brownian(fc.m, fc.horizon);
  }
  FunctionDescriptor f;
  try {
    f = make_builtin(fc.family, bp);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!fc.negate) return f;
  FunctionDescriptor::Flags flags;  // -f of a convex f is concave: no flags hold
  return FunctionDescriptor::custom(
      "-" + f.name(), f.dimension(), [f](std::span<const double> x) { return -f(x); }, flags, f.lipschitz_exact(),
      f.domain());
}

}  // namespace gaussdev::cli
