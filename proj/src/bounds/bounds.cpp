#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gaussdev/bounds.hpp"

namespace gaussdev {
namespace {

constexpr double kLn10 = std::numbers::ln10;
constexpr double kLogHalf = -std::numbers::ln2;

// log Phi(-x), accurate far beyond the range where Phi(-x) underflows.
double log_lower_normal(double x) {
  if (x < 30.0) return std::log(normal_cdf(-x));
  // Mills ratio by its continued fraction, evaluated bottom-up.
  double cf = x;
  for (int k = 60; k >= 1; --k) cf = x + k / cf;
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(cf);
}

double require(const BoundSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end())
    throw std::invalid_argument("bound '" + spec.kind + "' needs parameter '" + key + "'");
  return it->second;
}

double positive(const BoundSpec& spec, const std::string& key) {
  const double v = require(spec, key);
  if (!(v > 0.0 && std::isfinite(v)))
    throw std::invalid_argument("bound '" + spec.kind + "': parameter '" + key + "' must be positive");
  return v;
}


}  // namespace

double median_slope_constant() { return std::sqrt(2.0 * std::numbers::pi) / 32.0; }
double variance_rate_constant() { return std::numbers::pi / 1024.0; }
double smallball_kappa() { return std::numbers::pi / (4096.0 * std::numbers::ln2); }

std::string to_string(DeviationKind k) {
  switch (k) {
    case DeviationKind::gaussian_median: return "gaussian_median";
    case DeviationKind::gaussian_variance: return "gaussian_variance";
    case DeviationKind::gaussian_mean_clt: return "gaussian_mean_clt";
    case DeviationKind::gaussian_mean_crude: return "gaussian_mean_crude";
    case DeviationKind::lipschitz: return "lipschitz";
    case DeviationKind::exponential_unconditional: return "exponential_unconditional";
    case DeviationKind::chi_squared: return "chi_squared";
    case DeviationKind::concave_upper: return "concave_upper";
  }
  return "?";
}

std::string to_string(SmallBallKind k) {
  switch (k) {
    case SmallBallKind::kv: return "kv";
    case SmallBallKind::beta_gaussian: return "beta_gaussian";
    case SmallBallKind::beta_exponential: return "beta_exponential";
    case SmallBallKind::gp_sup: return "gp_sup";
  }
  return "?";
}

std::optional<DeviationKind> deviation_kind_from_string(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(DeviationKind::concave_upper); ++i) {
    const auto k = static_cast<DeviationKind>(i);
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<SmallBallKind> smallball_kind_from_string(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(SmallBallKind::gp_sup); ++i) {
    const auto k = static_cast<SmallBallKind>(i);
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Normalizer natural_normalizer(DeviationKind k) {
  switch (k) {
    case DeviationKind::gaussian_variance:
    case DeviationKind::gaussian_mean_clt:
    case DeviationKind::gaussian_mean_crude: return Normalizer::sqrt_variance;
    case DeviationKind::lipschitz: return Normalizer::unit;
    default: return Normalizer::plus_moment;
  }
}

Center natural_center(DeviationKind k) {
  return k == DeviationKind::gaussian_mean_clt || k == DeviationKind::gaussian_mean_crude ? Center::mean
                                                                                         : Center::median;
}

BoundSpec deviation_spec(const std::string& kind, std::map<std::string, double> params) {
  const auto k = deviation_kind_from_string(kind);
  if (!k) throw std::invalid_argument("unknown deviation bound '" + kind + "'");
  BoundSpec s{kind, std::move(params), {}, {}};
  switch (*k) {
    case DeviationKind::gaussian_median:
    case DeviationKind::concave_upper:
      s.constants["sqrt(2pi)/32"] = median_slope_constant();
      break;
    case DeviationKind::exponential_unconditional:
      s.constants["sqrt(2pi)/32"] = median_slope_constant();
      s.note = "constant derived from proof composition (Gaussian bound applied in dimension 2n)";
      break;
    case DeviationKind::gaussian_variance:
    case DeviationKind::gaussian_mean_clt:
      s.constants["pi/1024"] = variance_rate_constant();
      break;
    case DeviationKind::gaussian_mean_crude:
      s.constants["1/1000"] = 1.0 / 1000.0;
      break;
    case DeviationKind::lipschitz:
      positive(s, "L");
      break;
    case DeviationKind::chi_squared:
      s.constants["1/2"] = 0.5;
      break;
  }
  return s;
}

BoundSpec smallball_spec(const std::string& kind, std::map<std::string, double> params) {
  const auto k = smallball_kind_from_string(kind);
  if (!k) throw std::invalid_argument("unknown small-ball bound '" + kind + "'");
  BoundSpec s{kind, std::move(params), {}, {}};
  switch (*k) {
    case SmallBallKind::kv:
      positive(s, "d");
      s.constants["c"] = positive(s, "c");
      s.note = "c is a free input";
      break;
    case SmallBallKind::beta_gaussian:
    case SmallBallKind::beta_exponential:
      positive(s, "beta");
      s.constants["kappa=pi/(4096 ln2)"] = smallball_kappa();
      break;
    case SmallBallKind::gp_sup:
      positive(s, "M");
      positive(s, "v2");
      if (!s.params.contains("c")) {
        s.params["c"] = smallball_kappa();
        s.note = "c defaulted to kappa";
      }
      s.constants["c"] = positive(s, "c");
      break;
  }
  return s;
}

namespace {

// Natural log of the deviation bound.
double deviation_log(const BoundSpec& spec, double t) {
  const auto k = deviation_kind_from_string(spec.kind);
  if (!k) throw std::invalid_argument("unknown deviation bound '" + spec.kind + "'");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("deviation bound needs finite t >= 0");
  switch (*k) {
    case DeviationKind::gaussian_median:
    case DeviationKind::exponential_unconditional:
    case DeviationKind::concave_upper:
      return log_lower_normal(median_slope_constant() * t);
    case DeviationKind::gaussian_variance:
      return (kLogHalf - variance_rate_constant() * t * t);
    case DeviationKind::gaussian_mean_clt:
      if (!(t > 1.0)) throw std::domain_error("gaussian_mean_clt needs t > 1");
      return (kLogHalf - variance_rate_constant() * (t - 1.0) * (t - 1.0));
    case DeviationKind::gaussian_mean_crude:
      if (!(t > 1.0)) throw std::domain_error("gaussian_mean_crude needs t > 1");
      return -t * t / 1000.0;
    case DeviationKind::lipschitz: {
      const double L = positive(spec, "L");
      return (kLogHalf - 0.5 * t * t / (L * L));
    }
    case DeviationKind::chi_squared:
      return log_lower_normal(0.5 * t);
  }
  return 0.0;
}

}  // namespace

double deviation_bound_log10(const BoundSpec& spec, double t) { return deviation_log(spec, t) / kLn10; }

double deviation_bound(const BoundSpec& spec, double t) {
  const auto k = deviation_kind_from_string(spec.kind);
  // Normal-tail kinds evaluate Phi directly while it is representable.
  if (k == DeviationKind::gaussian_median || k == DeviationKind::exponential_unconditional ||
      k == DeviationKind::concave_upper || k == DeviationKind::chi_squared) {
    const double x = (k == DeviationKind::chi_squared ? 0.5 : median_slope_constant()) * t;
    if (t >= 0.0 && x < 30.0) return normal_cdf(-x);
  }
  return std::exp(deviation_log(spec, t));
}

double deviation_bound(DeviationKind kind, double t, std::map<std::string, double> params) {
  return deviation_bound(deviation_spec(to_string(kind), std::move(params)), t);
}

namespace {

double smallball_log(const BoundSpec& spec, double eps) {
  const auto k = smallball_kind_from_string(spec.kind);
  if (!k) throw std::invalid_argument("unknown small-ball bound '" + spec.kind + "'");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("small-ball bound needs 0 < eps < 1/2");
  double exponent = 0.0;
  switch (*k) {
    case SmallBallKind::kv: exponent = positive(spec, "c") * positive(spec, "d"); break;
    case SmallBallKind::beta_gaussian:
    case SmallBallKind::beta_exponential: exponent = smallball_kappa() / positive(spec, "beta"); break;
    case SmallBallKind::gp_sup: {
      const double m = positive(spec, "M");
      exponent = positive(spec, "c") * m * m / positive(spec, "v2");
      break;
    }
  }
  return kLogHalf + exponent * std::log(eps);
}

}  // namespace

double smallball_bound_log10(const BoundSpec& spec, double eps) { return smallball_log(spec, eps) / kLn10; }
double smallball_bound(const BoundSpec& spec, double eps) { return std::exp(smallball_log(spec, eps)); }

double smallball_bound(SmallBallKind kind, double eps, std::map<std::string, double> params) {
  return smallball_bound(smallball_spec(to_string(kind), std::move(params)), eps);
}

double negmoment_bound(double q, double beta, double C, double c) {
  if (!(q > 0.0) || !(beta > 0.0) || !(C > 0.0) || !(c > 0.0))
    throw std::invalid_argument("negmoment_bound: q, beta, C, c must be positive");
  if (!(q < c / beta)) {
    std::ostringstream os;
    os << "negmoment_bound: q = " << q << " is outside the validity window q < c/beta = " << c / beta;
    throw Refusal(os.str());
  }
  return std::exp(C * std::sqrt(beta) + C * q * beta);
}

double lipschitz_variance_diagnostic(double t, double sd, double L) {
  if (!(t > 0.0 && sd > 0.0 && L > 0.0)) throw std::invalid_argument("diagnostic needs positive t, sd, L");
  return std::min(1.0, std::exp(-0.5 * std::max(std::log(t / sd), t * t / (L * L))));
}

BoundCurve deviation_curve(const BoundSpec& spec, const std::vector<double>& thresholds) {
  BoundCurve c{thresholds, {}, {}, spec};
  for (double t : thresholds) {
    c.log10_values.push_back(deviation_bound_log10(spec, t));
    c.values.push_back(deviation_bound(spec, t));
  }
  return c;
}

BoundCurve smallball_curve(const BoundSpec& spec, const std::vector<double>& eps) {
  BoundCurve c{eps, {}, {}, spec};
  for (double e : eps) {
    c.log10_values.push_back(smallball_bound_log10(spec, e));
    c.values.push_back(smallball_bound(spec, e));
  }
  return c;
}

Verdict certify(const TailCurve& tail, const BoundCurve& bound, double confidence) {
  if (tail.thresholds.size() != bound.thresholds.size() || tail.probabilities.size() != tail.thresholds.size() ||
      tail.hits.size() != tail.thresholds.size())
    throw std::invalid_argument("certify: tail and bound grids differ in length");
  for (std::size_t i = 0; i < tail.thresholds.size(); ++i) {
    const double a = tail.thresholds[i], b = bound.thresholds[i];
    if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a)))
      throw std::invalid_argument("certify: threshold " + std::to_string(i) + " differs between tail and bound");
  }
  Verdict v;
  v.confidence = confidence;
  double tightest_gap = HUGE_VAL;
  for (std::size_t i = 0; i < tail.thresholds.size(); ++i) {
    const auto& p = tail.probabilities[i];
    // The lower end of a two-sided (2c - 1) interval is a one-sided level-c limit.
    const double lower = tail.hits[i] == 0 ? 0.0 : clopper_pearson(tail.hits[i], p.n_samples, 2.0 * confidence - 1.0).low;
    const bool ok = lower <= bound.values[i];
    v.lower_limits.push_back(lower);
    v.margins.push_back(bound.values[i] - p.value);
    v.cell_passed.push_back(ok);
    if (!ok && !v.first_failure) v.first_failure = i;
    v.passed = v.passed && ok;
    const double gap = bound.values[i] - lower;
    if (gap < tightest_gap) {
      tightest_gap = gap;
      v.tightest = i;
    }
  }
  return v;
}

}  // namespace gaussdev
