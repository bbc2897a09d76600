#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaussdev/bodies.hpp"
#include "gaussdev/error.hpp"
#include "gaussdev/randcore.hpp"

namespace gaussdev {

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = 0.99;
  std::size_t n_samples = 0;
  StreamSpec stream;
};

struct BinomialInterval {
  double low = 0.0;
  double high = 1.0;
};

// Exact binomial interval for k successes in n trials. Two-sided at level
// `confidence`; when k == 0 (k == n) the open side uses the one-sided exact
// bound 1 - (1 - confidence)^(1/n).
BinomialInterval clopper_pearson(std::size_t k, std::size_t n, double confidence);
// Two-sided standard normal critical value for `confidence`.
double z_critical(double confidence);

// Evaluated Monte Carlo sample of f(X): values in sample-index order plus a
// sorted copy. Everything downstream is computed from one of these so that
// medians, moments and tails are mutually consistent.
class SampleSet {
 public:
  SampleSet(std::vector<double> values, DistributionKind dist, StreamSpec stream, std::string label);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<const double> sorted() const { return sorted_; }
  const DistributionKind& dist() const { return dist_; }
  const StreamSpec& stream() const { return stream_; }
  const std::string& label() const { return label_; }

  std::size_t count_below(double s) const;     // #{x < s}
  std::size_t count_at_most(double s) const;   // #{x <= s}
  double cdf(double s) const;                  // #{x <= s} / N
  // Order statistic at fractional level in [0, 1].
  double quantile(double level) const;

  // Index-order halves, for cross-fitting (M from one half, tails from the other).
  SampleSet first_half() const;
  SampleSet second_half() const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  DistributionKind dist_;
  StreamSpec stream_;
  std::string label_;
};

// Samples X ~ dist on `stream` and evaluates f, streaming in chunks; the
// result is independent of `workers`.
SampleSet draw(const FunctionDescriptor& f, const DistributionKind& dist, const StreamSpec& stream,
               std::size_t n, unsigned workers = 1);

struct SummaryOptions {
  double confidence = 0.99;
  std::size_t bootstrap_resamples = 400;
  // F'(M+) window holds ceil(N^exponent) order statistics above the median.
  double slope_window_exponent = 2.0 / 3.0;
  std::size_t weak_l1_grid = 64;
  std::size_t min_samples = 10000;
};

struct SummaryStats {
  MCEstimate median;       // lower empirical median
  MCEstimate mean;
  MCEstimate variance;
  MCEstimate plus_moment;  // E(f - M)+
  MCEstimate cdf_slope;    // F'(M+)
  MCEstimate weak_l1;      // grid lower bound on sup_t t P((f - M)+ > t)
  double dominance_scale = 0.0;  // a with 1/a = sqrt(2 pi) F'(M+)
  std::size_t slope_window_points = 0;
  double slope_window = 0.0;
  bool degenerate = false;
};

SummaryStats summarize(const SampleSet& sample, const SummaryOptions& opts = {});
SummaryStats summarize(const FunctionDescriptor& f, const DistributionKind& dist, std::size_t n,
                       const StreamSpec& stream, const SummaryOptions& opts = {},
                       unsigned workers = 1);

enum class Normalizer { plus_moment, sqrt_variance, median_fraction, mean_fraction, unit };
enum class Center { median, mean };
enum class TailSide { lower, upper };

std::string to_string(Normalizer n);
Normalizer normalizer_from_string(const std::string& name);
std::string to_string(Center c);
std::string to_string(TailSide s);

struct TailCurve {
  std::string unit = "t";  // "t" or "epsilon"
  Normalizer normalizer = Normalizer::plus_moment;
  Center center = Center::median;
  TailSide side = TailSide::lower;
  double center_value = 0.0;
  double normalizer_value = 0.0;
  std::vector<double> thresholds;
  std::vector<MCEstimate> probabilities;
  std::vector<std::size_t> hits;
};

// Lower side: P(f - c < -t * s); upper side: P(f - c > t * s), with c the
// centre and s the normaliser. The centre defaults to the mean for
// mean_fraction and to the median otherwise.
TailCurve tail_curve(const SampleSet& sample, const SummaryStats& stats, Normalizer normalizer,
                     std::span<const double> grid, double confidence = 0.99,
                     std::optional<Center> center = std::nullopt,
                     TailSide side = TailSide::lower);

// P(f <= eps * M) over an epsilon grid in (0, 1).
TailCurve smallball_curve(const SampleSet& sample, const SummaryStats& stats,
                          std::span<const double> eps_grid, double confidence = 0.99);

struct GeometryParams {
  MCEstimate beta;  // Var / M^2
  MCEstimate k;     // E f^2 / b^2
  MCEstimate d;     // min{n, -log P(f <= M/2)}
  double b = 0.0;
  bool b_lower_bound_only = false;
  bool d_lower_bound_only = false;
};

GeometryParams geometry_params(const FunctionDescriptor& f, const SampleSet& sample,
                               const SummaryStats& stats, double confidence = 0.99);
GeometryParams geometry_params(const FunctionDescriptor& f, std::size_t n, const StreamSpec& stream,
                               const SummaryOptions& opts = {}, unsigned workers = 1);

struct NegativeMoment {
  double q = 0.0;
  MCEstimate estimate;         // (E f^{-q})^{1/q}
  double median_ratio = 0.0;   // M * estimate
  double mean_ratio = 0.0;     // E f * estimate
  double top_share = 0.0;      // share of sum f^{-q} carried by the 10 largest terms
  bool heavy_tail = false;     // top_share > 10%
};

// Refuses (throws Refusal) unless q < safety / beta-hat.
NegativeMoment negative_moment(const SampleSet& sample, const SummaryStats& stats, double q,
                               double confidence = 0.99, double safety = 0.5);
NegativeMoment negative_moment(const FunctionDescriptor& f, double q, std::size_t n,
                               const StreamSpec& stream, const SummaryOptions& opts = {},
                               unsigned workers = 1);

struct CurveCheck {
  std::string property;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_score = 0.0;  // largest defect in units of its propagated sigma
  bool skipped = false;
  std::string note;

  bool passed() const { return !skipped && violations == 0; }
};

// Midpoint concavity of Phi^{-1}(F-hat) on a quantile grid spanning the 1%-99%
// range, all grid pairs, tolerance 3 propagated sigmas.
CurveCheck phi_inv_concavity_check(const SampleSet& sample, std::size_t grid_size = 21);
CurveCheck phi_inv_concavity_check(const FunctionDescriptor& f, const DistributionKind& dist,
                                   std::size_t n, std::size_t grid_size, const StreamSpec& stream,
                                   unsigned workers = 1);
// Same for log F-hat.
CurveCheck log_concavity_check(const SampleSet& sample, std::size_t grid_size = 21);

struct DominanceReport {
  CurveCheck grid;              // F(s) <= Phi((s - M) / a) + 3 sigma on 21 points
  double mean_gap = 0.0;        // mean - M
  double mean_gap_sigma = 0.0;  // combined stderr of mean and median
  bool kwapien_ok = false;      // mean >= M - 3 sigma

  bool passed() const { return grid.passed() && kwapien_ok; }
};

DominanceReport dominance_check(const SampleSet& sample, const SummaryStats& stats);

struct InequalityCheck {
  std::string property;
  double lhs = 0.0;
  double rhs = 0.0;
  double sigma = 0.0;
  double margin_sigmas = 0.0;  // (favourable side - other side) / sigma
  bool passed = false;
};

// F'(M+) >= 1 / (32 E(f - M)+) - `sigmas` propagated sigmas.
InequalityCheck claim_check(const SummaryStats& stats, double sigmas = 3.0);
// Var <= L^2 + 3 stderr.
InequalityCheck variance_vs_lipschitz(const SummaryStats& stats, double lipschitz);
// E(f - M)+ <= sqrt(Var) + 3 sigma.
InequalityCheck plus_moment_vs_sd(const SummaryStats& stats);
// 1/beta >= k/9 - 3 sigma.
InequalityCheck beta_vs_k(const GeometryParams& g);

// Kolmogorov-Smirnov distances.
double ks_distance(std::span<const double> sorted_a, std::span<const double> sorted_b);
double ks_distance(std::span<const double> sorted_a, const std::function<double(double)>& cdf);

}  // namespace gaussdev
