#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstring>
#include <vector>

#include "gaussdev/philox.hpp"
#include "gaussdev/randcore.hpp"
#include "gaussdev/simd.hpp"

using namespace gaussdev;
using namespace gaussdev::simd;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t id) {
  const auto b = sample(DistributionKind::gaussian(1), StreamSpec{3, id}, n);
  return {b.data().begin(), b.data().end()};
}

const KernelTable* vector_table() {
  const auto* t = avx2_kernels();
  return t && cpu_supports(Isa::avx2) ? t : nullptr;
}

}  // namespace

TEST_CASE("isa names") {
  CHECK(to_string(Isa::scalar) == "scalar");
  CHECK(isa_from_string("avx2") == Isa::avx2);
  CHECK(!isa_from_string("neon"));
  CHECK(kernels(Isa::scalar).isa == Isa::scalar);
  CHECK(cpu_supports(Isa::scalar));
}

TEST_CASE("scalar philox words follow the documented counter layout") {
  const philox::Key key{0x1234, 0xabcd};
  std::vector<std::uint64_t> w(3 * 5);
  scalar_kernels().philox_words(key, 1000, 3, 5, w.data());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t b = 0; b < 3; ++b) {
      const auto r = philox::generate({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(1000 + i), 0, 0}, key);
      CHECK(w[i * 5 + 2 * b] == ((std::uint64_t{r[1]} << 32) | r[0]));
      if (2 * b + 1 < 5) CHECK(w[i * 5 + 2 * b + 1] == ((std::uint64_t{r[3]} << 32) | r[2]));
    }
}

TEST_CASE("vector sampler kernels are bit-identical to scalar") {
  const auto* v = vector_table();
  if (!v) {
    MESSAGE("AVX2 variant unavailable; skipped");
    return;
  }
  const auto& s = scalar_kernels();
  const philox::Key key{0xdeadbeef, 0x01234567};
  for (std::size_t wps : {1u, 2u, 3u, 7u, 8u, 64u, 65u}) {
    for (std::size_t count : {1u, 5u, 8u, 13u, 100u}) {
      for (std::uint64_t first : {std::uint64_t{0}, std::uint64_t{4294967290ull}, std::uint64_t{123456789012ull}}) {
        std::vector<std::uint64_t> a(wps * count), b(wps * count);
        s.philox_words(key, first, count, wps, a.data());
        v->philox_words(key, first, count, wps, b.data());
        CHECK(a == b);
      }
    }
  }
  std::vector<std::uint64_t> words(100003);
  s.philox_words(key, 0, words.size(), 1, words.data());
  // Edges of the central and tail branches.
  const std::uint64_t edges[] = {0, 1, 4095, 4096, ~std::uint64_t{0}, ~std::uint64_t{0} - 4096,
                                 std::uint64_t{1} << 63, (std::uint64_t{1} << 63) - 4096};
  for (std::size_t i = 0; i < std::size(edges); ++i) words[i * 3] = edges[i];
  for (int i = 0; i < 2000; ++i) {
    // Uniforms straddling 0.075 and 0.925, the branch split.
    const double u = (i < 1000 ? 0.075 : 0.925) + (i % 1000 - 500) * 1e-9;
    words[50000 + i] = static_cast<std::uint64_t>(u * 0x1.0p52) << 12;
  }
  std::vector<double> a(words.size()), b(words.size());
  s.normal_from_words(words.data(), words.size(), a.data());
  v->normal_from_words(words.data(), words.size(), b.data());
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mismatches += std::memcmp(&a[i], &b[i], sizeof(double)) != 0;
  CHECK(mismatches == 0);
  for (double x : a) REQUIRE(std::isfinite(x));
  CHECK(a[0] == doctest::Approx(-8.209536151601387).epsilon(1e-13));  // u = 2^-53
  CHECK(a[12] == -a[0]);
  for (std::size_t i = 0; i < 1000; ++i) CHECK(a[i] == normal_quantile_as241(open_unit(words[i])));
}

TEST_CASE("vector reductions agree with scalar to rounding") {
  const auto* v = vector_table();
  if (!v) return;
  const auto& s = scalar_kernels();
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 64u, 1001u, 4096u}) {
    const auto x = noise(n, 10 + n), y = noise(n, 20 + n);
    double mag = 1.0;
    for (double e : x) mag += std::fabs(e);
    CHECK(std::fabs(v->abs_sum(x.data(), n) - s.abs_sum(x.data(), n)) <= 1e-13 * mag);
    CHECK(std::fabs(v->sq_sum(x.data(), n) - s.sq_sum(x.data(), n)) <= 1e-13 * (1.0 + s.sq_sum(x.data(), n)));
    CHECK(v->abs_max(x.data(), n) == s.abs_max(x.data(), n));
    CHECK(std::fabs(v->dot(x.data(), y.data(), n) - s.dot(x.data(), y.data(), n)) <= 1e-13 * mag * 4);
    auto ya = y, yb = y;
    s.axpy(0.37, x.data(), ya.data(), n);
    v->axpy(0.37, x.data(), yb.data(), n);
    CHECK(ya == yb);
  }
  // Rows with ragged nonzero prefixes.
  const std::size_t rows = 37, stride = 53;
  auto m = noise(rows * stride, 99);
  std::vector<std::size_t> len(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    len[r] = (r * 7) % stride + 1;
    for (std::size_t j = len[r]; j < stride; ++j) m[r * stride + j] = 0.0;
  }
  const auto x = noise(stride, 98);
  CHECK(v->abs_max_rows(m.data(), len.data(), rows, stride, x.data()) ==
        doctest::Approx(s.abs_max_rows(m.data(), len.data(), rows, stride, x.data())).epsilon(1e-13));
}

TEST_CASE("scalar reductions") {
  const double x[] = {1.0, -2.0, 3.0, -4.0, 0.5};
  const auto& s = scalar_kernels();
  CHECK(s.abs_sum(x, 5) == 10.5);
  CHECK(s.sq_sum(x, 5) == 30.25);
  CHECK(s.abs_max(x, 5) == 4.0);
  CHECK(s.dot(x, x, 5) == 30.25);
  const double rows[] = {1, 0, 0, 1, 1, 0, 1, -1, 2};
  const std::size_t len[] = {1, 2, 3};
  const double v[] = {1.0, 2.0, 3.0};
  CHECK(s.abs_max_rows(rows, len, 3, 3, v) == 5.0);
}
