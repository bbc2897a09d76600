#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gaussdev/mc.hpp"

namespace gaussdev {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier-compensated running sum.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

MCEstimate normal_estimate(double value, double se, double confidence, std::size_t n,
                           const StreamSpec& stream) {
  const double z = z_critical(confidence);
  return {value, se, value - z * se, value + z * se, confidence, n, stream};
}

MCEstimate bootstrap_estimate(double value, std::vector<double> reps, double confidence,
                              std::size_t n, const StreamSpec& stream) {
  std::erase_if(reps, [](double r) { return !std::isfinite(r); });
  if (reps.size() < 2 || !std::isfinite(value)) return {value, kNaN, value, value, confidence, n, stream};
  Accumulator s;
  for (double r : reps) s.add(r);
  const double mean = s.value() / static_cast<double>(reps.size());
  Accumulator ss;
  for (double r : reps) ss.add((r - mean) * (r - mean));
  const double sd = std::sqrt(ss.value() / static_cast<double>(reps.size() - 1));
  std::sort(reps.begin(), reps.end());
  const double alpha = 1.0 - confidence;
  auto pick = [&](double level) {
    const auto idx = static_cast<std::size_t>(std::floor(level * static_cast<double>(reps.size() - 1)));
    return reps[idx];
  };
  return {value, sd, std::min(value, pick(0.5 * alpha)), std::max(value, pick(1.0 - 0.5 * alpha)),
          confidence, n, stream};
}

MCEstimate probability_estimate(std::size_t hits, std::size_t n, double confidence,
                                const StreamSpec& stream) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const auto ci = clopper_pearson(hits, n, confidence);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), ci.low, ci.high, confidence, n, stream};
}

// Poisson(1) by inversion of 64 random bits.
struct PoissonOneTable {
  std::array<std::uint64_t, 16> threshold{};
  PoissonOneTable() {
    long double term = std::exp(-1.0L), cdf = 0.0L;
    for (std::size_t k = 0; k < threshold.size(); ++k) {
      cdf += term;
      term /= static_cast<long double>(k + 1);
      const long double scaled = std::ldexp(cdf, 64);
      threshold[k] = scaled >= std::ldexp(1.0L, 64) ? ~std::uint64_t{0}
                                                     : static_cast<std::uint64_t>(scaled);
    }
  }
  std::uint8_t operator()(std::uint64_t bits) const {
    std::uint8_t k = 0;
    while (k < threshold.size() && bits >= threshold[k]) ++k;
    return k;
  }
};

struct BootstrapReplicates {
  std::vector<double> median, plus_moment, slope;
};

// Poisson bootstrap over the sorted sample; weights are a pure function of
// (stream, resample, sorted index).
BootstrapReplicates bootstrap(std::span<const double> x, const StreamSpec& stream,
                              std::size_t resamples, double window_exponent) {
  static const PoissonOneTable poisson;
  const std::size_t n = x.size();
  const auto key = stream.substream(0xB0075u).key();
  const std::uint64_t base = (std::uint64_t{key[1]} << 32) | key[0];
  BootstrapReplicates out;
  out.median.reserve(resamples);
  out.plus_moment.reserve(resamples);
  out.slope.reserve(resamples);
  std::vector<std::uint8_t> w(n);
  for (std::size_t r = 0; r < resamples; ++r) {
    const std::uint64_t rkey = splitmix64(base + r);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = poisson(splitmix64(rkey ^ (i * 0xD1B54A32D192ED03ull)));
      total += w[i];
    }
    if (total == 0) continue;
    const std::uint64_t half = (total + 1) / 2;
    std::uint64_t cum = 0;
    std::size_t j = 0;
    for (; j < n; ++j) {
      cum += w[j];
      if (cum >= half) break;
    }
    const double med = x[j];
    const auto window = static_cast<std::uint64_t>(
        std::ceil(std::pow(static_cast<double>(total), window_exponent)));
    std::uint64_t acc = 0;
    double slope = kNaN;
    Accumulator plus;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (w[i] == 0) continue;
      plus.add(static_cast<double>(w[i]) * (x[i] - med));
      if (acc < window) {
        acc += w[i];
        if (acc >= window) {
          const double h = x[i] - med;
          if (h > 0.0) slope = static_cast<double>(acc) / (static_cast<double>(total) * h);
        }
      }
    }
    out.median.push_back(med);
    out.plus_moment.push_back(plus.value() / static_cast<double>(total));
    out.slope.push_back(slope);
  }
  return out;
}

}  // namespace

SummaryStats summarize(const SampleSet& sample, const SummaryOptions& opts) {
  const std::size_t n = sample.size();
  if (n < opts.min_samples)
    throw Refusal("summarize: needs at least " + std::to_string(opts.min_samples) +
                  " samples, got " + std::to_string(n));
  const auto x = sample.sorted();
  const auto& stream = sample.stream();
  const double dn = static_cast<double>(n);
  const double conf = opts.confidence;
  SummaryStats st;

  const std::size_t mid = (n + 1) / 2 - 1;
  const double med = x[mid];

  Accumulator sum;
  for (double v : sample.values()) sum.add(v);
  const double mean = sum.value() / dn;
  Accumulator s2, s4;
  for (double v : sample.values()) {
    const double d = v - mean;
    s2.add(d * d);
    s4.add(d * d * d * d);
  }
  const double var = s2.value() / dn;
  const double m4 = s4.value() / dn;
  st.mean = normal_estimate(mean, std::sqrt(var / dn), conf, n, stream);
  st.variance = normal_estimate(var, std::sqrt(std::max(0.0, m4 - var * var) / dn), conf, n, stream);

  Accumulator plus;
  for (std::size_t i = mid + 1; i < n; ++i) plus.add(x[i] - med);
  const double plus_moment = plus.value() / dn;

  const auto window = static_cast<std::size_t>(std::ceil(std::pow(dn, opts.slope_window_exponent)));
  double slope = kNaN;
  if (mid + window < n) {
    const double h = x[mid + window] - med;
    if (h > 0.0) {
      const std::size_t inside = sample.count_at_most(med + h) - sample.count_at_most(med);
      slope = static_cast<double>(inside) / (dn * h);
      st.slope_window = h;
      st.slope_window_points = inside;
    }
  }
  st.degenerate = !(var > 0.0) || !std::isfinite(slope);

  const auto reps = bootstrap(x, stream, opts.bootstrap_resamples, opts.slope_window_exponent);
  st.median = bootstrap_estimate(med, reps.median, conf, n, stream);
  st.plus_moment = bootstrap_estimate(plus_moment, reps.plus_moment, conf, n, stream);
  st.cdf_slope = bootstrap_estimate(slope, reps.slope, conf, n, stream);
  st.dominance_scale = std::isfinite(slope) ? 1.0 / (std::sqrt(2.0 * std::numbers::pi) * slope) : kNaN;

  // Weak-L1: geometric grid between the 50th and 99.99th percentile of the
  // strictly positive part of (f - M)+.
  const std::size_t first_pos = sample.count_at_most(med);
  double best = 0.0, best_se = 0.0;
  if (first_pos < n && opts.weak_l1_grid > 0) {
    const std::size_t npos = n - first_pos;
    auto pos_quantile = [&](double level) {
      const auto idx = static_cast<std::size_t>(std::floor(level * static_cast<double>(npos - 1)));
      return x[first_pos + idx] - med;
    };
    const double lo = pos_quantile(0.5);
    const double hi = pos_quantile(0.9999);
    const std::size_t g = opts.weak_l1_grid;
    for (std::size_t i = 0; i < g; ++i) {
      const double t = g == 1 || hi <= lo
                           ? lo
                           : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(g - 1));
      const double p = static_cast<double>(n - sample.count_at_most(med + t)) / dn;
      if (t * p > best) {
        best = t * p;
        best_se = t * std::sqrt(p * (1.0 - p) / dn);
      }
    }
  }
  st.weak_l1 = normal_estimate(best, best_se, conf, n, stream);
  return st;
}

SummaryStats summarize(const FunctionDescriptor& f, const DistributionKind& dist, std::size_t n,
                       const StreamSpec& stream, const SummaryOptions& opts, unsigned workers) {
  return summarize(draw(f, dist, stream, n, workers), opts);
}

std::string to_string(Normalizer n) {
  switch (n) {
    case Normalizer::plus_moment: return "plus_moment";
    case Normalizer::sqrt_variance: return "sqrt_variance";
    case Normalizer::median_fraction: return "median_fraction";
    case Normalizer::mean_fraction: return "mean_fraction";
    case Normalizer::unit: return "unit";
  }
  return "?";
}

Normalizer normalizer_from_string(const std::string& name) {
  if (name == "plus_moment") return Normalizer::plus_moment;
  if (name == "sqrt_variance") return Normalizer::sqrt_variance;
  if (name == "median_fraction") return Normalizer::median_fraction;
  if (name == "mean_fraction") return Normalizer::mean_fraction;
  if (name == "unit") return Normalizer::unit;
  throw std::invalid_argument("unknown normalizer '" + name + "'");
}

std::string to_string(Center c) { return c == Center::median ? "median" : "mean"; }
std::string to_string(TailSide s) { return s == TailSide::lower ? "lower" : "upper"; }

namespace {

void check_grid(std::span<const double> grid, double lo, double hi, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= lo && grid[i] <= hi) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw std::invalid_argument(std::string(what) + ": grid must be strictly ascending within range");
  }
}

constexpr std::size_t kMinTailSamples = 100000;

}  // namespace

TailCurve tail_curve(const SampleSet& sample, const SummaryStats& stats, Normalizer normalizer,
                     std::span<const double> grid, double confidence, std::optional<Center> center,
                     TailSide side) {
  if (sample.size() < kMinTailSamples)
    throw Refusal("tail_curve: needs at least 1e5 samples, got " + std::to_string(sample.size()));
  check_grid(grid, 0.0, std::numeric_limits<double>::infinity(), "tail_curve");
  TailCurve c;
  c.normalizer = normalizer;
  c.side = side;
  c.center = center.value_or(normalizer == Normalizer::mean_fraction ? Center::mean : Center::median);
  c.center_value = c.center == Center::median ? stats.median.value : stats.mean.value;
  switch (normalizer) {
    case Normalizer::plus_moment: c.normalizer_value = stats.plus_moment.value; break;
    case Normalizer::sqrt_variance: c.normalizer_value = std::sqrt(stats.variance.value); break;
    case Normalizer::median_fraction: c.normalizer_value = stats.median.value; break;
    case Normalizer::mean_fraction: c.normalizer_value = stats.mean.value; break;
    case Normalizer::unit: c.normalizer_value = 1.0; break;
  }
  const std::size_t n = sample.size();
  for (double t : grid) {
    std::size_t hits;
    if (side == TailSide::lower)
      hits = sample.count_below(c.center_value - t * c.normalizer_value);
    else
      hits = n - sample.count_at_most(c.center_value + t * c.normalizer_value);
    c.thresholds.push_back(t);
    c.hits.push_back(hits);
    c.probabilities.push_back(probability_estimate(hits, n, confidence, sample.stream()));
  }
  return c;
}

TailCurve smallball_curve(const SampleSet& sample, const SummaryStats& stats,
                          std::span<const double> eps_grid, double confidence) {
  if (sample.size() < kMinTailSamples)
    throw Refusal("smallball_curve: needs at least 1e5 samples, got " + std::to_string(sample.size()));
  check_grid(eps_grid, 0.0, 1.0, "smallball_curve");
  TailCurve c;
  c.unit = "epsilon";
  c.normalizer = Normalizer::median_fraction;
  c.center = Center::median;
  c.center_value = 0.0;
  c.normalizer_value = stats.median.value;
  for (double eps : eps_grid) {
    const std::size_t hits = sample.count_at_most(eps * stats.median.value);
    c.thresholds.push_back(eps);
    c.hits.push_back(hits);
    c.probabilities.push_back(probability_estimate(hits, sample.size(), confidence, sample.stream()));
  }
  return c;
}

GeometryParams geometry_params(const FunctionDescriptor& f, const SampleSet& sample,
                               const SummaryStats& stats, double confidence) {
  if (!f.is_norm()) throw std::invalid_argument(f.name() + ": geometry parameters need a norm");
  if (sample.dist().family != DistributionKind::Family::gaussian)
    throw std::invalid_argument("geometry_params: Gaussian source required");
  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);
  const double med = stats.median.value;
  const double var = stats.variance.value;
  const auto& stream = sample.stream();
  GeometryParams g;

  const double beta = var / (med * med);
  const double se_beta = std::hypot(stats.variance.std_error / (med * med),
                                    2.0 * var * stats.median.std_error / (med * med * med));
  g.beta = normal_estimate(beta, se_beta, confidence, n, stream);

  const auto b = b_max_on_sphere(f, stream.substream(0xB5u));
  g.b = b.value;
  g.b_lower_bound_only = b.lower_bound_only;
  Accumulator s2;
  for (double v : sample.values()) s2.add(v * v);
  const double m2 = s2.value() / dn;
  Accumulator v2;
  for (double v : sample.values()) v2.add((v * v - m2) * (v * v - m2));
  const double b2 = b.value * b.value;
  g.k = normal_estimate(m2 / b2, std::sqrt(v2.value() / dn / dn) / b2, confidence, n, stream);

  const double dim = static_cast<double>(f.dimension());
  const std::size_t hits = sample.count_at_most(0.5 * med);
  const auto ci = clopper_pearson(hits, n, confidence);
  if (hits > 0) {
    const double p = static_cast<double>(hits) / dn;
    g.d = {std::min(dim, -std::log(p)), std::sqrt((1.0 - p) / (dn * p)), std::min(dim, -std::log(ci.high)),
           std::min(dim, -std::log(ci.low)), confidence, n, stream};
  } else {
    const double lower = std::min(dim, -std::log(ci.high));
    g.d = {lower, kNaN, lower, dim, confidence, n, stream};
    g.d_lower_bound_only = true;
  }
  return g;
}

GeometryParams geometry_params(const FunctionDescriptor& f, std::size_t n, const StreamSpec& stream,
                               const SummaryOptions& opts, unsigned workers) {
  if (!f.is_norm()) throw std::invalid_argument(f.name() + ": geometry parameters need a norm");
  const auto sample = draw(f, DistributionKind::gaussian(f.dimension()), stream, n, workers);
  return geometry_params(f, sample, summarize(sample, opts), opts.confidence);
}

NegativeMoment negative_moment(const SampleSet& sample, const SummaryStats& stats, double q,
                               double confidence, double safety) {
  if (!(q > 0.0)) throw std::invalid_argument("negative_moment: q must be positive");
  const double med = stats.median.value;
  const double beta = stats.variance.value / (med * med);
  if (!(q < safety / beta))
    throw Refusal("negative_moment: q = " + std::to_string(q) + " is outside the window q < " +
                  std::to_string(safety) + "/beta = " + std::to_string(safety / beta) +
                  "; E f^-q may diverge or be dominated by the few smallest samples");
  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);
  std::vector<double> y(n);
  Accumulator sum;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::pow(sample.values()[i] / med, -q);
    if (!std::isfinite(y[i])) throw Refusal("negative_moment: f vanished on a sample");
    sum.add(y[i]);
  }
  const double m = sum.value() / dn;
  Accumulator ss;
  for (double v : y) ss.add((v - m) * (v - m));
  const double se_m = std::sqrt(ss.value() / dn / dn);

  NegativeMoment out;
  out.q = q;
  const double est = std::pow(m, 1.0 / q) / med;
  const double se = std::pow(m, 1.0 / q - 1.0) * se_m / (q * med);
  out.estimate = normal_estimate(est, se, confidence, n, sample.stream());
  out.median_ratio = med * est;
  out.mean_ratio = stats.mean.value * est;

  // Largest y correspond to the smallest sample values.
  Accumulator top;
  const auto x = sample.sorted();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, n); ++i) top.add(std::pow(x[i] / med, -q));
  out.top_share = top.value() / sum.value();
  out.heavy_tail = out.top_share > 0.1;
  return out;
}

NegativeMoment negative_moment(const FunctionDescriptor& f, double q, std::size_t n,
                               const StreamSpec& stream, const SummaryOptions& opts,
                               unsigned workers) {
  if (!f.is_norm()) throw std::invalid_argument(f.name() + ": negative moments need a norm");
  const auto sample = draw(f, DistributionKind::gaussian(f.dimension()), stream, n, workers);
  return negative_moment(sample, summarize(sample, opts), q, opts.confidence);
}

}  // namespace gaussdev
