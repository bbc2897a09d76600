#include <algorithm>
#include <cmath>

#include "../randcore/as241.hpp"
#include "gaussdev/simd.hpp"

namespace gaussdev::simd {
namespace {

void philox_words(philox::Key key, std::uint64_t first_sample, std::size_t count,
                  std::size_t words_per_sample, std::uint64_t* out) {
  const std::size_t blocks = (words_per_sample + 1) / 2;
  for (std::size_t s = 0; s < count; ++s) {
    const std::uint64_t i = first_sample + s;
    std::uint64_t* row = out + s * words_per_sample;
    for (std::size_t b = 0; b < blocks; ++b) {
      const philox::Counter ctr{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(i),
                                static_cast<std::uint32_t>(i >> 32), 0u};
      const auto r = philox::generate(ctr, key);
      row[2 * b] = (std::uint64_t{r[1]} << 32) | r[0];
      if (2 * b + 1 < words_per_sample) row[2 * b + 1] = (std::uint64_t{r[3]} << 32) | r[2];
    }
  }
}

void normal_from_words(const std::uint64_t* words, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = as241::quantile(open_unit(words[i]));
}

double abs_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double sq_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double abs_max(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double abs_max_rows(const double* rows, const std::size_t* row_len, std::size_t nrows,
                    std::size_t stride, const double* x) {
  double m = 0.0;
  for (std::size_t r = 0; r < nrows; ++r) m = std::max(m, std::fabs(dot(rows + r * stride, x, row_len[r])));
  return m;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, philox_words, normal_from_words, abs_sum, sq_sum,
                                 abs_max,     dot,          abs_max_rows,      axpy};
  return table;
}

}  // namespace gaussdev::simd
