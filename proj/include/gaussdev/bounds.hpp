#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaussdev/error.hpp"
#include "gaussdev/mc.hpp"

namespace gaussdev {

// Pinned constants, computed once from their closed forms.
double median_slope_constant();    // sqrt(2 pi) / 32
double variance_rate_constant();   // pi / 1024
double smallball_kappa();          // pi / (4096 ln 2)

enum class DeviationKind {
  gaussian_median,
  gaussian_variance,
  gaussian_mean_clt,
  gaussian_mean_crude,
  lipschitz,
  exponential_unconditional,
  chi_squared,
  concave_upper,
};

enum class SmallBallKind { kv, beta_gaussian, beta_exponential, gp_sup };

std::string to_string(DeviationKind k);
std::string to_string(SmallBallKind k);
std::optional<DeviationKind> deviation_kind_from_string(const std::string& name);
std::optional<SmallBallKind> smallball_kind_from_string(const std::string& name);

// Normaliser the deviation kind is stated against, and its centre.
Normalizer natural_normalizer(DeviationKind k);
Center natural_center(DeviationKind k);

struct BoundSpec {
  std::string kind;
  std::map<std::string, double> params;     // beta, d, M, v2, L, c, ...
  std::map<std::string, double> constants;  // pinned numbers actually used
  std::string note;
};

// Builds and validates a spec; throws std::invalid_argument on an unknown
// kind or a missing parameter. Lipschitz needs "L"; kv needs "d" and "c";
// beta_* need "beta"; gp_sup needs "M" and "v2" ("c" defaults to kappa).
BoundSpec deviation_spec(const std::string& kind, std::map<std::string, double> params = {});
BoundSpec smallball_spec(const std::string& kind, std::map<std::string, double> params = {});

// Probability bounds. A value below 1e-300 is still returned (possibly as 0);
// the *_log10 variants stay exact.
double deviation_bound(const BoundSpec& spec, double t);
double deviation_bound_log10(const BoundSpec& spec, double t);
double smallball_bound(const BoundSpec& spec, double eps);
double smallball_bound_log10(const BoundSpec& spec, double eps);

// Convenience forms.
double deviation_bound(DeviationKind kind, double t, std::map<std::string, double> params = {});
double smallball_bound(SmallBallKind kind, double eps, std::map<std::string, double> params);

// exp(C sqrt(beta) + C q beta); refuses unless q < c / beta.
double negmoment_bound(double q, double beta, double C = 8.0, double c = 0.5);

// Variance plus Lipschitz diagnostic: exp(-max{log(t / sd), t^2 / L^2} / 2).
// Reported only, never certified.
double lipschitz_variance_diagnostic(double t, double sd, double L);

struct BoundCurve {
  std::vector<double> thresholds;
  std::vector<double> values;
  std::vector<double> log10_values;
  BoundSpec spec;
};

BoundCurve deviation_curve(const BoundSpec& spec, const std::vector<double>& thresholds);
BoundCurve smallball_curve(const BoundSpec& spec, const std::vector<double>& eps);

struct Verdict {
  bool passed = true;
  double confidence = 0.99;
  std::vector<double> lower_limits;  // one-sided lower confidence limits
  std::vector<double> margins;       // bound - point estimate
  std::vector<bool> cell_passed;
  std::size_t tightest = 0;          // index with the smallest bound - lower limit
  std::optional<std::size_t> first_failure;
};

// PASS iff at every threshold the one-sided lower confidence limit of the
// empirical probability is <= the bound. Throws std::invalid_argument on a
// grid mismatch.
Verdict certify(const TailCurve& tail, const BoundCurve& bound, double confidence = 0.99);

}  // namespace gaussdev
