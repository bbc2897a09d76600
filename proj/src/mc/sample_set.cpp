#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaussdev/mc.hpp"
#include "gaussdev/parallel.hpp"

namespace gaussdev {

SampleSet::SampleSet(std::vector<double> values, DistributionKind dist, StreamSpec stream,
                     std::string label)
    : values_(std::move(values)), sorted_(values_), dist_(dist), stream_(stream), label_(std::move(label)) {
  for (double v : values_)
    if (std::isnan(v)) throw std::domain_error(label_ + ": NaN function value");
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t SampleSet::count_below(double s) const {
  return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), s) - sorted_.begin());
}

std::size_t SampleSet::count_at_most(double s) const {
  return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), s) - sorted_.begin());
}

double SampleSet::cdf(double s) const {
  return static_cast<double>(count_at_most(s)) / static_cast<double>(size());
}

double SampleSet::quantile(double level) const {
  if (sorted_.empty()) throw std::logic_error("quantile of an empty sample");
  level = std::clamp(level, 0.0, 1.0);
  const auto idx = static_cast<std::size_t>(std::floor(level * static_cast<double>(sorted_.size() - 1)));
  return sorted_[idx];
}

SampleSet SampleSet::first_half() const {
  const std::size_t h = size() / 2;
  return SampleSet({values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(h)}, dist_,
                   stream_, label_ + "[first half]");
}

SampleSet SampleSet::second_half() const {
  const std::size_t h = size() / 2;
  return SampleSet({values_.begin() + static_cast<std::ptrdiff_t>(h), values_.end()}, dist_,
                   stream_, label_ + "[second half]");
}

SampleSet draw(const FunctionDescriptor& f, const DistributionKind& dist, const StreamSpec& stream,
               std::size_t n, unsigned workers) {
  if (f.dimension() != dist.dimension())
    throw std::invalid_argument(f.name() + " has dimension " + std::to_string(f.dimension()) +
                                " but the source " + dist.label() + " has dimension " +
                                std::to_string(dist.dimension()));
  std::vector<double> values(n);
  const std::size_t dim = dist.dimension();
  const std::size_t rows_per_chunk =
      std::max<std::size_t>(1, std::min<std::size_t>(stream.chunk_size, (std::size_t{1} << 17) / dim));
  parallel_chunks(n, rows_per_chunk, workers, [&](std::size_t begin, std::size_t end) {
    thread_local std::vector<std::uint64_t> words;
    thread_local std::vector<double> rows;
    const std::size_t count = end - begin;
    rows.resize(count * dim);
    sample_rows(dist, stream, begin, count, rows, words);
    f.evaluate_rows(rows, std::span<double>(values).subspan(begin, count));
  });
  return SampleSet(std::move(values), dist, stream, f.name() + " ~ " + dist.label());
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_distance(std::span<const double> a, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace gaussdev
