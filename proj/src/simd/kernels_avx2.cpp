// Compiled with -mavx2 only (no FMA) so the elementwise paths round exactly
// like the scalar reference.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "../randcore/as241.hpp"
#include "gaussdev/simd.hpp"

namespace gaussdev::simd {
namespace {

inline void mulhilo(__m256i a, std::uint32_t mul, __m256i& hi, __m256i& lo) {
  const __m256i m = _mm256_set1_epi32(static_cast<int>(mul));
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

// Eight Philox4x32-10 evaluations, one per 32-bit lane.
inline void philox8(__m256i& c0, __m256i& c1, __m256i& c2, __m256i& c3, philox::Key key) {
  for (int r = 0; r < philox::kRounds; ++r) {
    if (r > 0) {
      key[0] += philox::kWeyl0;
      key[1] += philox::kWeyl1;
    }
    __m256i hi0, lo0, hi1, lo1;
    mulhilo(c0, philox::kMul0, hi0, lo0);
    mulhilo(c2, philox::kMul1, hi1, lo1);
    const __m256i k0 = _mm256_set1_epi32(static_cast<int>(key[0]));
    const __m256i k1 = _mm256_set1_epi32(static_cast<int>(key[1]));
    c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
    c1 = lo1;
    c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
    c3 = lo0;
  }
}

void philox_words(philox::Key key, std::uint64_t first_sample, std::size_t count,
                  std::size_t words_per_sample, std::uint64_t* out) {
  const std::size_t blocks = (words_per_sample + 1) / 2;
  const std::size_t pairs = count * blocks;
  alignas(32) std::uint32_t in0[8], in1[8], in2[8];
  alignas(32) std::uint32_t r0[8], r1[8], r2[8], r3[8];
  std::size_t s = 0, b = 0;  // (sample, block) of the next pair
  std::size_t p = 0;
  for (; p + 8 <= pairs; p += 8) {
    std::size_t ss = s, bb = b;
    for (int l = 0; l < 8; ++l) {
      const std::uint64_t i = first_sample + ss;
      in0[l] = static_cast<std::uint32_t>(bb);
      in1[l] = static_cast<std::uint32_t>(i);
      in2[l] = static_cast<std::uint32_t>(i >> 32);
      if (++bb == blocks) {
        bb = 0;
        ++ss;
      }
    }
    __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(in0));
    __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(in1));
    __m256i c2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(in2));
    __m256i c3 = _mm256_setzero_si256();
    philox8(c0, c1, c2, c3, key);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r0), c0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r1), c1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r2), c2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r3), c3);
    for (int l = 0; l < 8; ++l) {
      std::uint64_t* row = out + s * words_per_sample;
      row[2 * b] = (std::uint64_t{r1[l]} << 32) | r0[l];
      if (2 * b + 1 < words_per_sample) row[2 * b + 1] = (std::uint64_t{r3[l]} << 32) | r2[l];
      if (++b == blocks) {
        b = 0;
        ++s;
      }
    }
  }
  for (; p < pairs; ++p) {
    const std::uint64_t i = first_sample + s;
    const philox::Counter ctr{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(i),
                              static_cast<std::uint32_t>(i >> 32), 0u};
    const auto r = philox::generate(ctr, key);
    std::uint64_t* row = out + s * words_per_sample;
    row[2 * b] = (std::uint64_t{r[1]} << 32) | r[0];
    if (2 * b + 1 < words_per_sample) row[2 * b + 1] = (std::uint64_t{r[3]} << 32) | r[2];
    if (++b == blocks) {
      b = 0;
      ++s;
    }
  }
}

inline __m256d horner(const double (&k)[8], __m256d r) {
  __m256d acc = _mm256_set1_pd(k[7]);
  for (int i = 6; i >= 0; --i) acc = _mm256_add_pd(_mm256_mul_pd(acc, r), _mm256_set1_pd(k[i]));
  return acc;
}

void normal_from_words(const std::uint64_t* words, std::size_t n, double* out) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d split = _mm256_set1_pd(as241::kSplit1);
  const __m256d c1 = _mm256_set1_pd(as241::kConst1);
  const __m256d sign = _mm256_set1_pd(-0.0);
  alignas(32) double u[4];
  alignas(32) double v[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) u[l] = open_unit(words[i + l]);
    const __m256d p = _mm256_load_pd(u);
    const __m256d q = _mm256_sub_pd(p, half);
    const __m256d inside = _mm256_cmp_pd(_mm256_andnot_pd(sign, q), split, _CMP_LE_OQ);
    const __m256d r = _mm256_sub_pd(c1, _mm256_mul_pd(q, q));
    const __m256d val =
        _mm256_div_pd(_mm256_mul_pd(q, horner(as241::a, r)), horner(as241::b, r));
    _mm256_store_pd(v, val);
    const int mask = _mm256_movemask_pd(inside);
    if (mask != 0xF)
      for (int l = 0; l < 4; ++l)
        if (!(mask & (1 << l))) v[l] = as241::tail(u[l]);
    _mm256_storeu_pd(out + i, _mm256_load_pd(v));
  }
  for (; i < n; ++i) out[i] = as241::quantile(open_unit(words[i]));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

double abs_sum(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i + 4)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double sq_sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a, a));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(b, b));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double abs_max(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  double out = hmax(m);
  for (; i < n; ++i) out = std::max(out, std::fabs(x[i]));
  return out;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double abs_max_rows(const double* rows, const std::size_t* row_len, std::size_t nrows,
                    std::size_t stride, const double* x) {
  double m = 0.0;
  for (std::size_t r = 0; r < nrows; ++r) m = std::max(m, std::fabs(dot(rows + r * stride, x, row_len[r])));
  return m;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                          _mm256_mul_pd(av, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Isa::avx2, philox_words, normal_from_words, abs_sum, sq_sum,
                                 abs_max,   dot,          abs_max_rows,      axpy};
  return &table;
}

}  // namespace gaussdev::simd
