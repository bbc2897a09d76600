#include <chrono>
#include <cmath>
#include <numbers>

#include "gaussdev/bounds.hpp"
#include "gaussdev/cli.hpp"
#include "gaussdev/jl.hpp"
#include "gaussdev/simd.hpp"

#ifndef GAUSSDEV_VERSION
#define GAUSSDEV_VERSION "dev"
#endif

namespace gaussdev::cli {
namespace {

json est(const MCEstimate& e) {
  return {{"value", number(e.value)},
          {"stderr", number(e.std_error)},
          {"ci_low", number(e.ci_low)},
          {"ci_high", number(e.ci_high)}};
}

json stats_json(const SummaryStats& s) {
  return {{"median", est(s.median)},
          {"mean", est(s.mean)},
          {"variance", est(s.variance)},
          {"plus_moment", est(s.plus_moment)},
          {"cdf_slope", est(s.cdf_slope)},
          {"weak_l1", est(s.weak_l1)},
          {"weak_l1_note", "maximum over a 64-point t-grid: a lower bound on the supremum"},
          {"dominance_scale", number(s.dominance_scale)},
          {"slope_window_points", s.slope_window_points},
          {"slope_window", number(s.slope_window)},
          {"degenerate", s.degenerate}};
}

json geometry_json(const GeometryParams& g) {
  return {{"beta", est(g.beta)},
          {"k", est(g.k)},
          {"d", est(g.d)},
          {"d_lower_bound_only", g.d_lower_bound_only},
          {"b", number(g.b)},
          {"b_lower_bound_only", g.b_lower_bound_only}};
}

json check_json(const CurveCheck& c) {
  return {{"property", c.property},
          {"checks", c.checks},
          {"violations", c.violations},
          {"worst_score_sigmas", number(c.worst_score)},
          {"skipped", c.skipped},
          {"note", c.note}};
}

json check_json(const InequalityCheck& c) {
  return {{"property", c.property},
          {"lhs", number(c.lhs)},
          {"rhs", number(c.rhs)},
          {"sigma", number(c.sigma)},
          {"margin_sigmas", number(c.margin_sigmas)},
          {"passed", c.passed}};
}

json spec_json(const BoundSpec& s) {
  json params = json::object(), consts = json::object();
  for (const auto& [k, v] : s.params) params[k] = number(v);
  for (const auto& [k, v] : s.constants) consts[k] = number(v);
  json j{{"kind", s.kind}, {"params", params}, {"constants", consts}};
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

json constants_json(const ExperimentConfig& c) {
  return {{"sqrt(2pi)/32", number(median_slope_constant())},
          {"pi/1024", number(variance_rate_constant())},
          {"kappa=pi/(4096 ln2)", number(smallball_kappa())},
          {"C", number(c.C)},
          {"c", number(c.c)},
          {"kv_c", c.kv_c ? number(*c.kv_c) : json(nullptr)}};
}

// Accumulates named verdicts; any failure makes the run exit 2.
struct Verdicts {
  json list = json::array();
  bool all = true;
  void add(const std::string& name, bool passed) {
    list.push_back({{"name", name}, {"passed", passed}});
    all = all && passed;
  }
};

struct Context {
  const ExperimentConfig& cfg;
  Report& report;
  Verdicts verdicts;
};

DistributionKind make_dist(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.dist == "gaussian") return DistributionKind::gaussian(n);
  if (cfg.dist == "exponential") return DistributionKind::exponential(n);
  return DistributionKind::chi_squared(cfg.dof, n);
}

StreamSpec function_stream(const ExperimentConfig& cfg, std::size_t index) {
  return StreamSpec{cfg.seed, 1 + index};
}

// f(X) has the law of a convex function of a Gaussian vector.
bool gaussian_representable(const FunctionDescriptor& f, const DistributionKind& d) {
  using F = DistributionKind::Family;
  if (!f.is_convex()) return false;
  if (d.family == F::gaussian) return true;
  if (d.family == F::exponential) return f.is_unconditional();
  return f.flags().is_nondecreasing;
}

SampleSet negated(const SampleSet& s) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (double& x : v) x = -x;
  return SampleSet(std::move(v), s.dist(), s.stream(), "-(" + s.label() + ")");
}

json curve_json(Context& ctx, const std::string& name, const TailCurve& tail, const BoundCurve& bound,
                const Verdict& v) {
  CurveTable table{name, {}, {}, {}, {}, {}, {}};
  json cells = json::array();
  for (std::size_t i = 0; i < tail.thresholds.size(); ++i) {
    const auto& p = tail.probabilities[i];
    cells.push_back({{tail.unit, number(tail.thresholds[i])},
                     {"hits", tail.hits[i]},
                     {"p_hat", number(p.value)},
                     {"ci_low", number(p.ci_low)},
                     {"ci_high", number(p.ci_high)},
                     {"lower_limit", number(v.lower_limits[i])},
                     {"bound", probability(bound.values[i], bound.log10_values[i])},
                     {"margin", number(v.margins[i])},
                     {"passed", static_cast<bool>(v.cell_passed[i])}});
    table.threshold.push_back(tail.thresholds[i]);
    table.p_hat.push_back(p.value);
    table.ci_low.push_back(p.ci_low);
    table.ci_high.push_back(p.ci_high);
    table.bound.push_back(bound.values[i]);
    table.margin.push_back(v.margins[i]);
  }
  ctx.report.curves.push_back(std::move(table));
  return {{"name", name},
          {"bound", spec_json(bound.spec)},
          {"normalizer", to_string(tail.normalizer)},
          {"center", to_string(tail.center)},
          {"center_value", number(tail.center_value)},
          {"normalizer_value", number(tail.normalizer_value)},
          {"cells", cells},
          {"tightest_index", v.tightest},
          {"verdict", v.passed ? "PASS" : "FAIL"}};
}

void require_compatible(DeviationKind k, const FunctionDescriptor& f, const DistributionKind& d) {
  using F = DistributionKind::Family;
  auto refuse = [&](const std::string& why) {
    throw Refusal("bound " + to_string(k) + " does not apply to " + f.name() + " under " + d.label() + ": " + why);
  };
  switch (k) {
    case DeviationKind::gaussian_median:
    case DeviationKind::gaussian_variance:
    case DeviationKind::gaussian_mean_clt:
    case DeviationKind::gaussian_mean_crude:
      if (d.family != F::gaussian) refuse("Gaussian source required");
      if (!f.is_convex()) refuse("convex function required");
      break;
    case DeviationKind::lipschitz:
      if (d.family != F::gaussian) refuse("Gaussian source required");
      if (!f.lipschitz_exact()) refuse("no exact Lipschitz constant");
      break;
    case DeviationKind::exponential_unconditional:
      if (d.family != F::exponential) refuse("exponential source required");
      if (!f.is_convex() || !f.is_unconditional()) refuse("1-unconditional convex function required");
      break;
    case DeviationKind::chi_squared:
      if (d.family != F::chi_squared) refuse("chi-squared source required");
      if (!f.is_convex() || !f.flags().is_nondecreasing) refuse("coordinatewise nondecreasing convex function required");
      break;
    case DeviationKind::concave_upper:
      if (d.family != F::gaussian) refuse("Gaussian source required");
      break;
  }
}

void deviation_suite(Context& ctx) {
  const auto& cfg = ctx.cfg;
  json bodies = json::array();
  for (std::size_t fi = 0; fi < cfg.functions.size(); ++fi) {
    const auto& fc = cfg.functions[fi];
    const auto f = build_function(fc, cfg.seed);
    const auto dist = make_dist(cfg, f.dimension());
    const auto stream = function_stream(cfg, fi);
    const auto full = draw(f, dist, stream, cfg.samples, cfg.workers);
    // For -f (concave) every statement is made about f = -(-f).
    const auto base = fc.negate ? negated(full) : full;
    const SampleSet stat_sample = cfg.cross_fit ? base.first_half() : base;
    const SampleSet tail_sample = cfg.cross_fit ? base.second_half() : base;
    const auto stats = summarize(stat_sample, cfg.summary);
    json body{{"function", to_json(fc)}, {"name", f.name()}, {"dist", dist.label()},
              {"stream", {{"master_seed", stream.master_seed}, {"stream_id", stream.stream_id}}},
              {"samples", full.size()}, {"cross_fit", cfg.cross_fit}, {"stats", stats_json(stats)}};

    json curves = json::array();
    for (const auto& kind_name : cfg.bounds) {
      const auto kind = deviation_kind_from_string(kind_name);
      if (!kind) throw ConfigError("unknown deviation bound '" + kind_name + "'");
      if (*kind == DeviationKind::concave_upper) {
        if (!fc.negate) throw Refusal("concave_upper needs a concave function (set \"negate\": true)");
      } else if (fc.negate) {
        throw Refusal("bound " + kind_name + " needs a convex function; " + f.name() + " is concave");
      } else {
        require_compatible(*kind, f, dist);
      }
      std::vector<double> grid;
      for (double t : cfg.grid)
        if (t > 1.0 || (*kind != DeviationKind::gaussian_mean_clt && *kind != DeviationKind::gaussian_mean_crude))
          grid.push_back(t);
      if (grid.empty()) continue;
      std::map<std::string, double> params;
      if (*kind == DeviationKind::lipschitz) params["L"] = *f.lipschitz_exact();
      const auto spec = deviation_spec(kind_name, params);
      const auto tail = tail_curve(tail_sample, stats, natural_normalizer(*kind), grid, cfg.confidence,
                                   natural_center(*kind));
      const auto bound = deviation_curve(spec, grid);
      const auto v = certify(tail, bound, cfg.confidence);
      ctx.verdicts.add(f.name() + "/" + kind_name, v.passed);
      curves.push_back(curve_json(ctx, f.name() + "." + kind_name, tail, bound, v));
    }
    body["curves"] = curves;

    // Weak-L1 normalisation: reported against the same shape, no constant asserted.
    if (stats.weak_l1.value > 0.0) {
      std::vector<double> scaled;
      for (double t : cfg.grid) scaled.push_back(t * stats.weak_l1.value);
      const auto tail = tail_curve(tail_sample, stats, Normalizer::unit, scaled, cfg.confidence);
      json cells = json::array();
      for (std::size_t i = 0; i < scaled.size(); ++i)
        cells.push_back({{"t", number(cfg.grid[i])},
                         {"p_hat", number(tail.probabilities[i].value)},
                         {"ci_high", number(tail.probabilities[i].ci_high)},
                         {"shape", number(normal_cdf(-median_slope_constant() * cfg.grid[i]))}});
      body["weak_l1_curve"] = {{"mode", "report-only"}, {"cells", cells}};
    }

    json checks = json::array();
    const bool rep = !fc.negate && gaussian_representable(f, dist);
    if (rep && !stats.degenerate) {
      const auto claim = claim_check(stats);
      checks.push_back(check_json(claim));
      ctx.verdicts.add(f.name() + "/cdf_slope_lower_bound", claim.passed);
      const auto dom = dominance_check(tail_sample, stats);
      json dj = check_json(dom.grid);
      dj["mean_gap"] = number(dom.mean_gap);
      dj["mean_gap_sigma"] = number(dom.mean_gap_sigma);
      dj["mean_ge_median"] = dom.kwapien_ok;
      checks.push_back(dj);
      ctx.verdicts.add(f.name() + "/mean_ge_median", dom.kwapien_ok);
      if (!dom.grid.skipped) ctx.verdicts.add(f.name() + "/gaussian_dominance", dom.grid.passed());
      for (const auto& c : {phi_inv_concavity_check(tail_sample), log_concavity_check(tail_sample)}) {
        checks.push_back(check_json(c));
        if (!c.skipped) ctx.verdicts.add(f.name() + "/" + c.property, c.passed());
      }
    }
    if (!fc.negate && dist.family == DistributionKind::Family::gaussian && f.lipschitz_exact()) {
      const auto c = variance_vs_lipschitz(stats, *f.lipschitz_exact());
      checks.push_back(check_json(c));
      ctx.verdicts.add(f.name() + "/" + c.property, c.passed);
      // Variance-plus-Lipschitz overlay, never certified.
      const double sd = std::sqrt(stats.variance.value);
      json overlay = json::array();
      for (double t : cfg.grid) {
        const double s = t * sd;
        const double p = static_cast<double>(base.count_below(stats.median.value - s) + base.size() -
                                             base.count_at_most(stats.median.value + s)) /
                         static_cast<double>(base.size());
        overlay.push_back({{"t", number(t)},
                           {"p_hat_two_sided", number(p)},
                           {"diagnostic", number(lipschitz_variance_diagnostic(s, sd, *f.lipschitz_exact()))}});
      }
      body["lipschitz_variance_overlay"] = {{"mode", "report-only"}, {"cells", overlay}};
    }
    {
      const auto c = plus_moment_vs_sd(stats);
      checks.push_back(check_json(c));
      ctx.verdicts.add(f.name() + "/" + c.property, c.passed);
    }
    body["checks"] = checks;
    bodies.push_back(body);
  }
  ctx.report.payload["bodies"] = bodies;
}

// Least-squares slope of log p-hat against log eps over cells with >= 5 hits.
json log_slope(const TailCurve& c) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < c.thresholds.size(); ++i)
    if (c.hits[i] >= 5) {
      x.push_back(std::log(c.thresholds[i]));
      y.push_back(std::log(c.probabilities[i].value));
    }
  if (x.size() < 2) return {{"slope", nullptr}, {"cells", x.size()}, {"note", "fewer than 2 cells with >= 5 hits"}};
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return {{"slope", number(sxy / sxx)}, {"cells", x.size()}};
}

void smallball_suite(Context& ctx, bool gp) {
  const auto& cfg = ctx.cfg;
  json bodies = json::array();
  for (std::size_t fi = 0; fi < cfg.functions.size(); ++fi) {
    const auto& fc = cfg.functions[fi];
    const auto f = build_function(fc, cfg.seed);
    if (!f.is_norm()) throw Refusal(f.name() + " is not a norm; small-ball bounds need a norm");
    const auto dist = make_dist(cfg, f.dimension());
    if (dist.family == DistributionKind::Family::chi_squared)
      throw Refusal("small-ball suites need a Gaussian or exponential source");
    if (dist.family == DistributionKind::Family::exponential && !f.is_unconditional())
      throw Refusal(f.name() + " is not 1-unconditional; exponential small-ball bound does not apply");
    const auto stream = function_stream(cfg, fi);
    const auto sample = draw(f, dist, stream, cfg.samples, cfg.workers);
    const auto stats = summarize(sample, cfg.summary);
    const double med = stats.median.value;
    const double var = stats.variance.value;
    json body{{"function", to_json(fc)}, {"name", f.name()}, {"dist", dist.label()},
              {"stream", {{"master_seed", stream.master_seed}, {"stream_id", stream.stream_id}}},
              {"samples", sample.size()}, {"stats", stats_json(stats)},
              {"beta", number(var / (med * med))}};
    std::optional<GeometryParams> geo;
    if (dist.family == DistributionKind::Family::gaussian) {
      geo = geometry_params(f, sample, stats, cfg.confidence);
      body["geometry"] = geometry_json(*geo);
    }
    const auto tail = smallball_curve(sample, stats, cfg.grid, cfg.confidence);
    body["log_slope"] = log_slope(tail);

    json curves = json::array();
    for (const auto& kind_name : cfg.bounds) {
      const auto kind = smallball_kind_from_string(kind_name);
      if (!kind) throw ConfigError("unknown small-ball bound '" + kind_name + "'");
      std::map<std::string, double> params;
      switch (*kind) {
        case SmallBallKind::beta_gaussian:
          if (dist.family != DistributionKind::Family::gaussian) throw Refusal("beta_gaussian needs a Gaussian source");
          params["beta"] = var / (med * med);
          break;
        case SmallBallKind::beta_exponential:
          if (dist.family != DistributionKind::Family::exponential)
            throw Refusal("beta_exponential needs an exponential source");
          params["beta"] = var / (med * med);
          break;
        case SmallBallKind::gp_sup:
          if (f.family() != Family::gp_sup && !gp) throw Refusal("gp_sup bound needs a Gaussian process supremum");
          params["M"] = med;
          params["v2"] = var;
          break;
        case SmallBallKind::kv: {
          if (!geo) throw Refusal("kv bound needs a Gaussian source");
          if (!cfg.kv_c) {
            // Fit-and-report: the largest c the data allow at every eps.
            double c_max = HUGE_VAL;
            for (std::size_t i = 0; i < tail.thresholds.size(); ++i)
              c_max = std::min(c_max, std::log(2.0 * tail.probabilities[i].ci_high) /
                                          (geo->d.value * std::log(tail.thresholds[i])));
            body["kv_fit"] = {{"mode", "fit-and-report"}, {"d", number(geo->d.value)}, {"c_max", number(c_max)}};
            continue;
          }
          params["d"] = geo->d.value;
          params["c"] = *cfg.kv_c;
          break;
        }
      }
      const auto spec = smallball_spec(kind_name, params);
      const auto bound = smallball_curve(spec, cfg.grid);
      const auto v = certify(tail, bound, cfg.confidence);
      ctx.verdicts.add(f.name() + "/" + kind_name, v.passed);
      curves.push_back(curve_json(ctx, f.name() + "." + kind_name, tail, bound, v));
    }
    body["curves"] = curves;
    bodies.push_back(body);
  }
  ctx.report.payload["bodies"] = bodies;
}

void params_suite(Context& ctx) {
  const auto& cfg = ctx.cfg;
  json bodies = json::array(), findings = json::array();
  for (std::size_t fi = 0; fi < cfg.functions.size(); ++fi) {
    const auto& fc = cfg.functions[fi];
    const auto f = build_function(fc, cfg.seed);
    if (!f.is_norm()) throw Refusal(f.name() + " is not a norm; geometry parameters need a norm");
    const auto stream = function_stream(cfg, fi);
    const auto sample = draw(f, DistributionKind::gaussian(f.dimension()), stream, cfg.samples, cfg.workers);
    const auto stats = summarize(sample, cfg.summary);
    const auto geo = geometry_params(f, sample, stats, cfg.confidence);
    const auto bk = beta_vs_k(geo);
    if (!bk.passed) findings.push_back({{"function", f.name()}, {"check", check_json(bk)}});
    ctx.verdicts.add(f.name() + "/d_le_n", geo.d.value <= static_cast<double>(f.dimension()));
    bodies.push_back({{"function", to_json(fc)},
                      {"name", f.name()},
                      {"stream", {{"master_seed", stream.master_seed}, {"stream_id", stream.stream_id}}},
                      {"stats", stats_json(stats)},
                      {"geometry", geometry_json(geo)},
                      {"beta_times_n", number(geo.beta.value * static_cast<double>(f.dimension()))},
                      {"beta_vs_k", check_json(bk)}});
  }
  ctx.report.payload["bodies"] = bodies;
  ctx.report.payload["findings"] = findings;
}

void negmoments_suite(Context& ctx) {
  const auto& cfg = ctx.cfg;
  json bodies = json::array();
  for (std::size_t fi = 0; fi < cfg.functions.size(); ++fi) {
    const auto& fc = cfg.functions[fi];
    const auto f = build_function(fc, cfg.seed);
    if (!f.is_norm()) throw Refusal(f.name() + " is not a norm; negative moments need a norm");
    const auto stream = function_stream(cfg, fi);
    const auto sample = draw(f, DistributionKind::gaussian(f.dimension()), stream, cfg.samples, cfg.workers);
    const auto stats = summarize(sample, cfg.summary);
    const double med = stats.median.value;
    const double beta = stats.variance.value / (med * med);
    json rows = json::array();
    double prev = 0.0, c_fit = 0.0;
    bool finite = true, clean = true, monotone = true;
    for (double q : cfg.q) {
      const auto nm = negative_moment(sample, stats, q, cfg.confidence, cfg.c);
      finite = finite && std::isfinite(nm.estimate.value);
      clean = clean && !nm.heavy_tail;
      monotone = monotone && nm.median_ratio >= prev;
      prev = nm.median_ratio;
      const double denom = std::sqrt(beta) + q * beta;
      if (nm.mean_ratio > 1.0) c_fit = std::max(c_fit, std::log(nm.mean_ratio) / denom);
      json row{{"q", number(q)},
               {"estimate", est(nm.estimate)},
               {"median_ratio", number(nm.median_ratio)},
               {"mean_ratio", number(nm.mean_ratio)},
               {"top10_share", number(nm.top_share)},
               {"heavy_tail", nm.heavy_tail}};
      row["bound"] = number(negmoment_bound(q, beta, cfg.C, cfg.c));
      rows.push_back(row);
    }
    ctx.verdicts.add(f.name() + "/finite", finite);
    ctx.verdicts.add(f.name() + "/heavy_tail_clean", clean);
    ctx.verdicts.add(f.name() + "/nondecreasing_in_q", monotone);
    bodies.push_back({{"function", to_json(fc)},
                      {"name", f.name()},
                      {"stream", {{"master_seed", stream.master_seed}, {"stream_id", stream.stream_id}}},
                      {"stats", stats_json(stats)},
                      {"beta", number(beta)},
                      {"moments", rows},
                      {"fitted_C", {{"mode", "fit-and-report"}, {"value", number(c_fit)}}}});
  }
  ctx.report.payload["bodies"] = bodies;
}

void jl_suite(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& jc = cfg.jl;
  const auto target = build_function(jc.target, cfg.seed);
  if (!target.is_norm()) throw Refusal(target.name() + " is not a norm; the embedding needs a normed target");
  const auto scale = estimate_scale(target, jc.scale_samples, StreamSpec{cfg.seed, 0x5CA1Eu}, cfg.workers);
  PointSet points;
  const StreamSpec point_stream{cfg.seed, 0x9017u};
  if (jc.points == "sphere")
    points = sphere_points(jc.n_points, jc.source_dim, point_stream);
  else if (jc.points == "gaussian")
    points = gaussian_cloud(jc.n_points, jc.source_dim, point_stream);
  else
    points = load_points_csv(jc.points);
  EmbeddingSpec spec;
  spec.source_dim = points.empty() ? jc.source_dim : points.front().size();
  spec.target = target;
  spec.mode = jl_mode_from_string(jc.mode);
  spec.delta = jc.delta;
  spec.epsilon = jc.epsilon;
  spec.stream = StreamSpec{cfg.seed, 0x71A1u};
  spec.scale = scale.mean.value;
  const double beta = scale.beta.value;
  const auto rep = run_trials(spec, points, jc.trials, beta, cfg.workers);
  ctx.verdicts.add("failure_frequency_within_bound", rep.passed());
  json cap = nullptr;
  if (spec.mode == JLMode::i) {
    const auto c = capacity(jc.delta, beta, jc.capacity_target);
    cap = {{"target", number(jc.capacity_target)}, {"n_points", c.n_points}, {"unbounded", c.unbounded}};
  }
  double lo = HUGE_VAL;
  for (double m : rep.min_ratios) lo = std::min(lo, m);
  ctx.report.payload["jl"] = {{"target", to_json(jc.target)},
                              {"scale", est(scale.mean)},
                              {"beta", est(scale.beta)},
                              {"points", points.size()},
                              {"source_dim", spec.source_dim},
                              {"mode", to_string(spec.mode)},
                              {"threshold", number(rep.threshold)},
                              {"trials", rep.trials},
                              {"failures", rep.failures},
                              {"frequency", number(rep.frequency())},
                              {"stderr", number(rep.std_error())},
                              {"failure_bound", number(rep.bound)},
                              {"min_ratio_over_trials", number(lo)},
                              {"excluded_pairs", rep.excluded_pairs},
                              {"warnings", rep.warnings},
                              {"capacity", cap},
                              {"verdict", rep.passed() ? "PASS" : "FAIL"}};
}

void calibration_suite(Context& ctx) {
  const auto& cfg = ctx.cfg;
  json bodies = json::array();
  for (std::size_t fi = 0; fi < cfg.functions.size(); ++fi) {
    const auto& fc = cfg.functions[fi];
    if (fc.family != "linear_functional") throw Refusal("calibration runs on linear functionals only");
    const auto f = build_function(fc, cfg.seed);
    double norm2 = 0.0;
    for (double a : f.direction()) norm2 += a * a;
    const double s = std::sqrt(norm2);
    const auto stream = function_stream(cfg, fi);
    const auto sample = draw(f, DistributionKind::gaussian(f.dimension()), stream, cfg.samples, cfg.workers);
    const auto stats = summarize(sample, cfg.summary);
    const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    json checks = json::array();
    auto check = [&](const std::string& name, const MCEstimate& e, double truth) {
      const double z = std::fabs(e.value - truth) / e.std_error;
      const bool ok = z <= 4.0;
      checks.push_back({{"quantity", name}, {"estimate", est(e)}, {"exact", number(truth)},
                        {"abs_error", number(std::fabs(e.value - truth))}, {"z", number(z)}, {"passed", ok}});
      ctx.verdicts.add(f.name() + "/" + name, ok);
    };
    check("median", stats.median, 0.0);
    check("mean", stats.mean, 0.0);
    check("variance", stats.variance, norm2);
    check("plus_moment", stats.plus_moment, s * inv_sqrt2pi);
    check("cdf_slope", stats.cdf_slope, inv_sqrt2pi / s);
    const auto tail = tail_curve(sample, stats, Normalizer::plus_moment, cfg.grid, cfg.confidence);
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
      check("lower_tail_t=" + std::to_string(cfg.grid[i]).substr(0, 4), tail.probabilities[i],
            normal_cdf(-cfg.grid[i] * inv_sqrt2pi));
    bodies.push_back({{"function", to_json(fc)}, {"name", f.name()}, {"stats", stats_json(stats)}, {"checks", checks}});
  }
  ctx.report.payload["bodies"] = bodies;
}

}  // namespace

Report run(const ExperimentConfig& config) {
  Report report;
  const auto start = std::chrono::steady_clock::now();
  report.payload["config"] = to_json(config, false);
  report.payload["constants"] = constants_json(config);
  Context ctx{config, report, {}};
  try {
    if (config.suite == "deviation")
      deviation_suite(ctx);
    else if (config.suite == "smallball")
      smallball_suite(ctx, false);
    else if (config.suite == "gp")
      smallball_suite(ctx, true);
    else if (config.suite == "params")
      params_suite(ctx);
    else if (config.suite == "negmoments")
      negmoments_suite(ctx);
    else if (config.suite == "jl")
      jl_suite(ctx);
    else if (config.suite == "calibration")
      calibration_suite(ctx);
    else
      throw ConfigError("unknown suite '" + config.suite + "'");
    report.payload["verdicts"] = ctx.verdicts.list;
    report.status = ctx.verdicts.all ? 0 : 2;
    report.payload["status"] = ctx.verdicts.all ? "PASS" : "FAIL";
  } catch (const Refusal& e) {
    report.payload["status"] = "REFUSED";
    report.payload["refusal"] = e.what();
    report.status = 3;
    report.curves.clear();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.meta = {{"runtime_s", std::round(secs * 1000.0) / 1000.0},
                 {"isa", simd::to_string(simd::kernels().isa)},
                 {"version", GAUSSDEV_VERSION},
                 {"workers", config.workers},
                 {"output", config.output},
                 {"format", config.format}};
  return report;
}

}  // namespace gaussdev::cli
