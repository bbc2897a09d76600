#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gaussdev/bounds.hpp"
#include "gaussdev/error.hpp"
#include "gaussdev/jl.hpp"
#include "gaussdev/parallel.hpp"
#include "gaussdev/simd.hpp"

namespace gaussdev {

std::string to_string(JLMode m) { return m == JLMode::i ? "i" : "ii"; }

JLMode jl_mode_from_string(const std::string& s) {
  if (s == "i") return JLMode::i;
  if (s == "ii") return JLMode::ii;
  throw std::invalid_argument("jl mode must be 'i' or 'ii', got '" + s + "'");
}

double EmbeddingSpec::threshold() const { return mode == JLMode::i ? 1.0 - delta : epsilon; }

PointSet embed(const PointSet& points, std::size_t n, const StreamSpec& stream) {
  if (n == 0) throw std::invalid_argument("embed: target dimension must be positive");
  if (points.empty()) return {};
  const std::size_t N = points.front().size();
  for (const auto& u : points)
    if (u.size() != N)
      throw std::invalid_argument("embed: point of dimension " + std::to_string(u.size()) +
                                  ", expected " + std::to_string(N));
  const auto columns = sample(DistributionKind::gaussian(n), stream, N);
  const auto& k = simd::kernels();
  PointSet images(points.size(), Point(n, 0.0));
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t j = 0; j < N; ++j)
      if (points[p][j] != 0.0) k.axpy(points[p][j], columns.row(j).data(), images[p].data(), n);
  return images;
}

DistortionResult verify_lower_isometry(const EmbeddingSpec& spec, const PointSet& images,
                                       const PointSet& originals) {
  if (!(spec.scale > 0.0)) throw std::invalid_argument("verify_lower_isometry: scale must be positive");
  if (images.size() != originals.size())
    throw std::invalid_argument("verify_lower_isometry: images and originals differ in count");
  const std::size_t n = spec.target.dimension();
  DistortionResult r;
  Point diff(n);
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < originals[i].size(); ++c) {
        const double d = originals[i][c] - originals[j][c];
        d2 += d * d;
      }
      if (d2 == 0.0) {
        ++r.excluded_pairs;
        r.warnings.push_back("points " + std::to_string(i) + " and " + std::to_string(j) +
                             " coincide; pair excluded");
        continue;
      }
      for (std::size_t c = 0; c < n; ++c) diff[c] = images[i][c] - images[j][c];
      const double ratio = spec.target(diff) / (spec.scale * std::sqrt(d2));
      ++r.pairs;
      if (ratio < r.min_ratio) {
        r.min_ratio = ratio;
        r.worst_i = i;
        r.worst_j = j;
      }
    }
  }
  r.passed = r.pairs == 0 || r.min_ratio >= spec.threshold();
  return r;
}

double failure_bound(std::size_t n_points, JLMode mode, double x, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("failure_bound: beta must be positive");
  const double pairs = 0.5 * static_cast<double>(n_points) * (static_cast<double>(n_points) - 1.0);
  double per_pair;
  if (mode == JLMode::i) {
    if (!(x > 0.0 && x < 1.0)) throw Refusal("failure_bound: delta must lie in (0, 1)");
    if (!(x / std::sqrt(beta) > 1.0))
      throw Refusal("failure_bound: delta / sqrt(beta) = " + std::to_string(x / std::sqrt(beta)) +
                    " <= 1, outside the validity of the mean-centred tail bound");
    per_pair = std::exp(-x * x / (1000.0 * beta));
  } else {
    if (!(x > 0.0 && x < 0.5)) throw Refusal("failure_bound: epsilon must lie in (0, 1/2)");
    per_pair = 2.0 * x < 0.5 ? 0.5 * std::pow(2.0 * x, smallball_kappa() / beta) : 0.5;
  }
  if (pairs == 0.0) return 0.0;
  return std::min(1.0, pairs * per_pair);
}

Capacity capacity(double delta, double beta, double target) {
  failure_bound(2, JLMode::i, delta, beta);  // validity checks only
  if (!(target > 0.0)) throw std::invalid_argument("capacity: target must be positive");
  if (target >= 1.0) return {1, true};
  // C(n, 2) e^{-delta^2 / (1000 beta)} <= target  <=>  n(n - 1) / 2 <= X.
  const double X = target * std::exp(delta * delta / (1000.0 * beta));
  if (X > 1e30) return {std::uint64_t{1} << 62, true};
  auto ok = [X](std::uint64_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) <= X; };
  auto n = static_cast<std::uint64_t>(std::floor(0.5 * (1.0 + std::sqrt(1.0 + 8.0 * X))));
  n = std::max<std::uint64_t>(n, 1);
  while (n > 1 && !ok(n)) --n;
  while (ok(n + 1)) ++n;
  return {n, false};
}

double TrialReport::std_error() const {
  const double p = frequency();
  return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

bool TrialReport::passed() const { return frequency() <= bound + 3.0 * std_error(); }

TrialReport run_trials(const EmbeddingSpec& spec, const PointSet& points, std::size_t trials, double beta,
                       unsigned workers) {
  TrialReport rep;
  rep.mode = spec.mode;
  rep.trials = trials;
  rep.threshold = spec.threshold();
  rep.beta = beta;
  rep.scale = spec.scale;
  rep.bound = failure_bound(points.size(), spec.mode, spec.mode == JLMode::i ? spec.delta : spec.epsilon, beta);
  rep.min_ratios.assign(trials, 0.0);
  std::vector<std::size_t> excluded(trials, 0);
  std::vector<std::vector<std::string>> warnings(trials);
  parallel_chunks(trials, 1, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto images = embed(points, spec.target.dimension(), spec.stream.substream(r));
      auto res = verify_lower_isometry(spec, images, points);
      rep.min_ratios[r] = res.min_ratio;
      excluded[r] = res.excluded_pairs;
      if (r == 0) warnings[r] = std::move(res.warnings);
    }
  });
  for (double m : rep.min_ratios)
    if (m < rep.threshold) ++rep.failures;
  rep.excluded_pairs = excluded.empty() ? 0 : excluded.front();
  if (!warnings.empty()) rep.warnings = std::move(warnings.front());
  return rep;
}

ScaleEstimate estimate_scale(const FunctionDescriptor& target, std::size_t n_samples, const StreamSpec& stream,
                             unsigned workers) {
  const auto sample = draw(target, DistributionKind::gaussian(target.dimension()), stream, n_samples, workers);
  const auto stats = summarize(sample);
  const double med = stats.median.value;
  const double var = stats.variance.value;
  const double beta = var / (med * med);
  const double se = std::hypot(stats.variance.std_error / (med * med),
                               2.0 * var * stats.median.std_error / (med * med * med));
  const double z = z_critical(stats.mean.confidence);
  return {stats.mean, {beta, se, beta - z * se, beta + z * se, stats.mean.confidence, n_samples, stream}};
}

PointSet gaussian_cloud(std::size_t count, std::size_t dim, const StreamSpec& stream) {
  const auto block = sample(DistributionKind::gaussian(dim), stream, count);
  PointSet pts;
  for (std::size_t i = 0; i < count; ++i) pts.emplace_back(block.row(i).begin(), block.row(i).end());
  return pts;
}

PointSet sphere_points(std::size_t count, std::size_t dim, const StreamSpec& stream) {
  auto pts = gaussian_cloud(count, dim, stream);
  for (auto& p : pts) {
    double s = 0.0;
    for (double v : p) s += v * v;
    s = std::sqrt(s);
    for (double& v : p) v /= s;
  }
  return pts;
}

PointSet load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point file '" + path + "'");
  PointSet pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    Point p;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        p.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (!pts.empty() && p.size() != pts.front().size())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": ragged row");
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace gaussdev
