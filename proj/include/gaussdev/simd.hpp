#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "gaussdev/philox.hpp"

namespace gaussdev::simd {

enum class Isa { scalar, avx2 };

std::string to_string(Isa isa);
std::optional<Isa> isa_from_string(const std::string& name);

// Inner-loop kernels. Every variant of the sampler kernels is bit-identical to
// the scalar reference; the reductions agree to rounding (summation order
// differs).
struct KernelTable {
  Isa isa;

  // Random words for `count` consecutive samples starting at `first_sample`,
  // `words_per_sample` each. Word w of sample i comes from the Philox block
  // counter {w / 2, lo32(i), hi32(i), 0}, half w % 2.
  void (*philox_words)(philox::Key key, std::uint64_t first_sample, std::size_t count,
                       std::size_t words_per_sample, std::uint64_t* out);
  // out[i] = normal_quantile_as241(open_unit(words[i])).
  void (*normal_from_words)(const std::uint64_t* words, std::size_t n, double* out);

  double (*abs_sum)(const double* x, std::size_t n);
  double (*sq_sum)(const double* x, std::size_t n);
  double (*abs_max)(const double* x, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // max_r |<rows[r], x>| where row r occupies rows + r * stride and only its
  // first row_len[r] entries are nonzero.
  double (*abs_max_rows)(const double* rows, const std::size_t* row_len, std::size_t nrows,
                         std::size_t stride, const double* x);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_supports(Isa isa);

// Active table. Chosen once: GAUSSDEV_ISA=scalar|avx2 if set and supported,
// else the widest supported variant.
const KernelTable& kernels();
const KernelTable& kernels(Isa isa);
Isa detected_isa();

}  // namespace gaussdev::simd
