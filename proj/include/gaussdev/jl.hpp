#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaussdev/bodies.hpp"
#include "gaussdev/mc.hpp"

namespace gaussdev {

using Point = std::vector<double>;
using PointSet = std::vector<Point>;

enum class JLMode { i, ii };
std::string to_string(JLMode m);
JLMode jl_mode_from_string(const std::string& s);

struct EmbeddingSpec {
  std::size_t source_dim = 0;
  FunctionDescriptor target;     // norm on R^n
  JLMode mode = JLMode::i;
  double delta = 0.5;            // mode i
  double epsilon = 0.25;         // mode ii
  StreamSpec stream;
  double scale = 0.0;            // E||Z||_X, estimated on an independent stream

  // Minimum admissible distortion ratio: 1 - delta (i) or epsilon (ii).
  double threshold() const;
};

// Images G u for G the n x N matrix whose j-th column is sample j of
// gaussian(n) on `stream`.
PointSet embed(const PointSet& points, std::size_t n, const StreamSpec& stream);

struct DistortionResult {
  double min_ratio = HUGE_VAL;
  std::size_t pairs = 0;
  std::size_t excluded_pairs = 0;  // duplicate points
  std::size_t worst_i = 0, worst_j = 0;
  bool passed = true;
  std::vector<std::string> warnings;
};

// min over pairs of ||G(u_i - u_j)||_X / (scale ||u_i - u_j||_2).
DistortionResult verify_lower_isometry(const EmbeddingSpec& spec, const PointSet& images,
                                       const PointSet& originals);

// Union bound over the C(n_points, 2) pair directions. Mode i uses
// e^{-delta^2 / (1000 beta)} per pair and refuses unless delta / sqrt(beta) > 1;
// mode ii uses 1/2 (2 eps)^{kappa / beta} per pair (1/2 once 2 eps >= 1/2) and
// refuses unless 0 < eps < 1/2.
double failure_bound(std::size_t n_points, JLMode mode, double delta_or_eps, double beta);

struct Capacity {
  std::uint64_t n_points = 1;
  bool unbounded = false;
};

// Largest n_points with mode-i failure_bound <= target.
Capacity capacity(double delta, double beta, double target);

struct TrialReport {
  JLMode mode = JLMode::i;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<double> min_ratios;
  double threshold = 0.0;
  double bound = 1.0;
  double beta = 0.0;
  double scale = 0.0;
  std::size_t excluded_pairs = 0;
  std::vector<std::string> warnings;

  double frequency() const { return trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0; }
  double std_error() const;
  // frequency <= bound + 3 binomial stderr.
  bool passed() const;
};

// Trial r draws its matrix from spec.stream.substream(r); beta is the
// target's beta-hat used for the bound.
TrialReport run_trials(const EmbeddingSpec& spec, const PointSet& points, std::size_t trials,
                       double beta, unsigned workers = 1);

struct ScaleEstimate {
  MCEstimate mean;  // E||Z||_X
  MCEstimate beta;
};

ScaleEstimate estimate_scale(const FunctionDescriptor& target, std::size_t n_samples,
                             const StreamSpec& stream, unsigned workers = 1);

PointSet sphere_points(std::size_t count, std::size_t dim, const StreamSpec& stream);
PointSet gaussian_cloud(std::size_t count, std::size_t dim, const StreamSpec& stream);
// One vector per row, comma separated; throws on ragged rows.
PointSet load_points_csv(const std::string& path);

}  // namespace gaussdev
