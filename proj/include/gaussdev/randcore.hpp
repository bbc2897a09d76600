#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaussdev/philox.hpp"

namespace gaussdev {

// Source law of the random vector fed to a test function.
//   gaussian(n):        n i.i.d. N(0,1) coordinates
//   exponential(n):     n i.i.d. two-sided exponential coordinates, density e^{-|x|}/2
//   chi_squared(k, n):  n i.i.d. chi-squared(k) coordinates (n = 1 by default)
struct DistributionKind {
  enum class Family { gaussian, exponential, chi_squared };

  Family family = Family::gaussian;
  std::size_t n = 1;
  std::size_t dof = 1;

  static DistributionKind gaussian(std::size_t n);
  static DistributionKind exponential(std::size_t n);
  static DistributionKind chi_squared(std::size_t k, std::size_t n = 1);

  std::size_t dimension() const { return n; }
  // Random 64-bit words consumed per sample.
  std::size_t words_per_sample() const;
  std::string label() const;

  friend bool operator==(const DistributionKind&, const DistributionKind&) = default;
};

std::string to_string(DistributionKind::Family family);
DistributionKind::Family family_from_string(const std::string& name);

// Identifies one reproducible random stream. The sample at global index i is a
// pure function of (master_seed, stream_id, i).
struct StreamSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  std::size_t chunk_size = 4096;

  philox::Key key() const;
  // A stream that is independent of this one, e.g. for a held-out estimate.
  StreamSpec substream(std::uint64_t tag) const;

  friend bool operator==(const StreamSpec&, const StreamSpec&) = default;
};

// Row-major count x dimension block of samples.
class SampleBlock {
 public:
  SampleBlock() = default;
  SampleBlock(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  SampleBlock(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  friend bool operator==(const SampleBlock&, const SampleBlock&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Standard normal CDF. Saturates to 0/1 beyond +-40.
double normal_cdf(double x);
double normal_pdf(double x);
// Inverse of normal_cdf; throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);
// Wichura's AS241 rational approximation without refinement; the sampler's
// transform. Relative accuracy ~1e-16 over (0, 1).
double normal_quantile_as241(double p);
// Upper estimate Phi(-u) <= exp(-u^2/2) / 2, u >= 0.
double mills_upper(double u);

// 64 random bits at `index` on an auxiliary lane of the stream (disjoint from
// the coordinate words for any tag != 0).
std::uint64_t random_bits(const StreamSpec& stream, std::uint64_t index, std::uint32_t tag = 1);
inline double uniform_at(const StreamSpec& stream, std::uint64_t index, std::uint32_t tag = 1) {
  return open_unit(random_bits(stream, index, tag));
}

inline constexpr std::size_t kDefaultMemoryBudgetBytes = std::size_t{1} << 30;

// count x dimension block; deterministic in (dist, stream, count) and
// independent of `workers`. Throws std::length_error above the memory budget.
SampleBlock sample(const DistributionKind& dist, const StreamSpec& stream, std::size_t count,
                   unsigned workers = 1, std::size_t memory_budget = kDefaultMemoryBudgetBytes);

// Fills rows [first, first + count) into `out` (count * dimension values).
// `scratch` is reused between calls to avoid reallocation.
void sample_rows(const DistributionKind& dist, const StreamSpec& stream, std::uint64_t first,
                 std::size_t count, std::span<double> out, std::vector<std::uint64_t>& scratch);

}  // namespace gaussdev
