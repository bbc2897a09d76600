#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "gaussdev/mc.hpp"

namespace gaussdev {
namespace {

std::vector<double> quantile_grid(const SampleSet& sample, std::size_t grid_size) {
  if (grid_size < 3) throw std::invalid_argument("concavity check needs at least 3 grid points");
  std::vector<double> s;
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double level = 0.01 + 0.98 * static_cast<double>(j) / static_cast<double>(grid_size - 1);
    const double v = sample.quantile(level);
    if (s.empty() || v > s.back()) s.push_back(v);
  }
  return s;
}

struct Transformed {
  double h = 0.0;
  double sigma = 0.0;
  bool ok = false;
};

// Midpoint concavity of s -> h(F-hat(s)) over all grid pairs. `transform`
// maps F to (h, dh/dF).
CurveCheck midpoint_concavity(const SampleSet& sample, std::size_t grid_size, std::string property,
                              const std::function<std::pair<double, double>(double)>& transform) {
  CurveCheck out;
  out.property = std::move(property);
  const auto grid = quantile_grid(sample, grid_size);
  if (grid.size() < 3) {
    out.skipped = true;
    out.note = "sample has fewer than 3 distinct quantiles on the 1%-99% range";
    return out;
  }
  const double n = static_cast<double>(sample.size());
  auto at = [&](double s) {
    const double f = sample.cdf(s);
    if (!(f > 0.0 && f < 1.0)) return Transformed{};
    const auto [h, dh] = transform(f);
    return Transformed{h, std::fabs(dh) * std::sqrt(f * (1.0 - f) / n), true};
  };
  std::vector<Transformed> node(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) node[i] = at(grid[i]);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const auto m = at(0.5 * (grid[i] + grid[j]));
      if (!node[i].ok || !node[j].ok || !m.ok) continue;
      const double defect = 0.5 * (node[i].h + node[j].h) - m.h;
      const double sigma =
          std::sqrt(m.sigma * m.sigma + 0.25 * (node[i].sigma * node[i].sigma + node[j].sigma * node[j].sigma));
      ++out.checks;
      const double score = sigma > 0.0 ? defect / sigma : (defect > 0.0 ? HUGE_VAL : 0.0);
      out.worst_score = std::max(out.worst_score, score);
      if (defect > 3.0 * sigma) ++out.violations;
    }
  }
  if (out.checks == 0) {
    out.skipped = true;
    out.note = "no usable grid pairs";
  }
  return out;
}

}  // namespace

CurveCheck phi_inv_concavity_check(const SampleSet& sample, std::size_t grid_size) {
  return midpoint_concavity(sample, grid_size, "phi_inv_concavity", [](double f) {
    const double h = normal_quantile(f);
    return std::pair{h, 1.0 / normal_pdf(h)};
  });
}

CurveCheck phi_inv_concavity_check(const FunctionDescriptor& f, const DistributionKind& dist,
                                   std::size_t n, std::size_t grid_size, const StreamSpec& stream,
                                   unsigned workers) {
  return phi_inv_concavity_check(draw(f, dist, stream, n, workers), grid_size);
}

CurveCheck log_concavity_check(const SampleSet& sample, std::size_t grid_size) {
  return midpoint_concavity(sample, grid_size, "log_concavity",
                            [](double f) { return std::pair{std::log(f), 1.0 / f}; });
}

DominanceReport dominance_check(const SampleSet& sample, const SummaryStats& stats) {
  DominanceReport out;
  out.grid.property = "gaussian_dominance";
  const double med = stats.median.value;
  out.mean_gap = stats.mean.value - med;
  out.mean_gap_sigma = std::hypot(stats.mean.std_error, stats.median.std_error);
  out.kwapien_ok = stats.mean.value >= med - 3.0 * out.mean_gap_sigma;

  const double slope = stats.cdf_slope.value;
  if (stats.degenerate || !(slope > 0.0) || !std::isfinite(stats.dominance_scale)) {
    out.grid.skipped = true;
    out.grid.note = "F'(M+) degenerate or not positive";
    return out;
  }
  const double a = stats.dominance_scale;
  const double se_a = std::isfinite(stats.cdf_slope.std_error) ? a * stats.cdf_slope.std_error / slope : 0.0;
  const double se_m = std::isfinite(stats.median.std_error) ? stats.median.std_error : 0.0;
  const double n = static_cast<double>(sample.size());
  for (std::size_t j = 0; j < 21; ++j) {
    const double s = sample.quantile(0.01 + 0.98 * static_cast<double>(j) / 20.0);
    const double f = sample.cdf(s);
    const double z = (s - med) / a;
    const double bound = normal_cdf(z);
    const double dz = normal_pdf(z) / a;
    const double sigma = std::sqrt(f * (1.0 - f) / n + dz * dz * (se_m * se_m + z * z * se_a * se_a));
    const double defect = f - bound;
    ++out.grid.checks;
    out.grid.worst_score = std::max(out.grid.worst_score, sigma > 0.0 ? defect / sigma : 0.0);
    if (defect > 3.0 * sigma) ++out.grid.violations;
  }
  return out;
}

InequalityCheck claim_check(const SummaryStats& stats, double sigmas) {
  InequalityCheck c;
  c.property = "cdf_slope_lower_bound";
  c.lhs = stats.cdf_slope.value;
  c.rhs = 1.0 / (32.0 * stats.plus_moment.value);
  const double rel_plus = stats.plus_moment.std_error / stats.plus_moment.value;
  c.sigma = std::hypot(stats.cdf_slope.std_error, c.rhs * rel_plus);
  c.margin_sigmas = (c.lhs - c.rhs) / c.sigma;
  c.passed = std::isfinite(c.lhs) && c.lhs >= c.rhs - sigmas * c.sigma;
  return c;
}

InequalityCheck variance_vs_lipschitz(const SummaryStats& stats, double lipschitz) {
  InequalityCheck c;
  c.property = "variance_le_lipschitz_squared";
  c.lhs = stats.variance.value;
  c.rhs = lipschitz * lipschitz;
  c.sigma = stats.variance.std_error;
  c.margin_sigmas = c.sigma > 0.0 ? (c.rhs - c.lhs) / c.sigma : HUGE_VAL;
  c.passed = c.lhs <= c.rhs + 3.0 * c.sigma;
  return c;
}

InequalityCheck plus_moment_vs_sd(const SummaryStats& stats) {
  InequalityCheck c;
  c.property = "plus_moment_le_sd";
  c.lhs = stats.plus_moment.value;
  c.rhs = std::sqrt(stats.variance.value);
  const double se_sd = c.rhs > 0.0 ? stats.variance.std_error / (2.0 * c.rhs) : 0.0;
  c.sigma = std::hypot(stats.plus_moment.std_error, se_sd);
  c.margin_sigmas = c.sigma > 0.0 ? (c.rhs - c.lhs) / c.sigma : HUGE_VAL;
  c.passed = c.lhs <= c.rhs + 3.0 * c.sigma;
  return c;
}

InequalityCheck beta_vs_k(const GeometryParams& g) {
  InequalityCheck c;
  c.property = "inverse_beta_ge_k_over_9";
  c.lhs = 1.0 / g.beta.value;
  c.rhs = g.k.value / 9.0;
  c.sigma = std::hypot(g.beta.std_error * c.lhs * c.lhs, g.k.std_error / 9.0);
  c.margin_sigmas = c.sigma > 0.0 ? (c.lhs - c.rhs) / c.sigma : HUGE_VAL;
  c.passed = c.lhs >= c.rhs - 3.0 * c.sigma;
  return c;
}

}  // namespace gaussdev
