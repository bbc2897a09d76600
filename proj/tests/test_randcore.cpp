#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numeric>

#include "gaussdev/mc.hpp"
#include "gaussdev/philox.hpp"
#include "gaussdev/randcore.hpp"

using namespace gaussdev;
using boost::multiprecision::cpp_dec_float_50;

namespace {

double cdf_oracle(double x) {
  const cpp_dec_float_50 z = cpp_dec_float_50(x) / boost::multiprecision::sqrt(cpp_dec_float_50(2));
  return static_cast<double>(boost::multiprecision::erfc(-z) / 2);
}

std::vector<double> column(const SampleBlock& b, std::size_t c) {
  std::vector<double> v(b.rows());
  for (std::size_t i = 0; i < b.rows(); ++i) v[i] = b.row(i)[c];
  return v;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_CASE("philox known answers") {
  using philox::generate;
  CHECK(generate({0, 0, 0, 0}, {0, 0}) == philox::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        philox::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        philox::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("open_unit stays inside (0, 1)") {
  CHECK(open_unit(0) > 0.0);
  CHECK(open_unit(~std::uint64_t{0}) < 1.0);
  CHECK(open_unit(std::uint64_t{1} << 63) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(open_unit(0) == 0x1.0p-53);
  CHECK(open_unit(~std::uint64_t{0}) == 1.0 - 0x1.0p-53);
}

TEST_CASE("normal_cdf examples") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.1586552539).epsilon(1e-10));
  CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096e-16).epsilon(1e-5));
  CHECK(normal_cdf(-41.0) == 0.0);
  CHECK(normal_cdf(41.0) == 1.0);
}

TEST_CASE("normal_cdf against a 50-digit oracle on [-10, 10]") {
  double worst = 0.0, worst_sym = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -10.0 + 0.01 * i;
    const double v = normal_cdf(x);
    worst = std::max(worst, std::fabs(v - cdf_oracle(x)));
    worst_sym = std::max(worst_sym, std::fabs(v + normal_cdf(-x) - 1.0));
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(worst <= 1e-14);
  CHECK(worst_sym <= 1e-15);
}

TEST_CASE("normal_quantile") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.1586552539) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(normal_quantile(0.9999) == doctest::Approx(3.71902).epsilon(1e-4 / 3.71902));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), std::domain_error);

  double prev = -HUGE_VAL, worst = 0.0;
  for (int i = 1; i < 10000; ++i) {
    const double p = i / 10000.0;
    const double x = normal_quantile(p);
    CHECK(x > prev);
    prev = x;
    worst = std::max(worst, std::fabs(normal_cdf(x) - p));
  }
  CHECK(worst <= 1e-12);
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1 - 1e-10})
    CHECK(std::fabs(normal_cdf(normal_quantile(p)) - p) <= 1e-12 * std::max(1.0, p) + 1e-14 * p);
}

TEST_CASE("round trip on [-6, 6]") {
  // Exact on the lower half. Above 0, Phi(x) = 1 - tail is stored with an
  // absolute spacing of 2^-53, so Phi^{-1} can only recover x to within
  // ulp(Phi(x)) / phi(x); the check there is against that floor.
  double worst_lower = 0.0, worst_excess = 0.0;
  for (int i = 0; i <= 1200; ++i) {
    const double x = -6.0 + 0.01 * i;
    const double p = normal_cdf(x);
    const double err = std::fabs(normal_quantile(p) - x);
    if (x <= 0.0) worst_lower = std::max(worst_lower, err);
    const double floor = std::nextafter(p, 2.0) - p;
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    worst_excess = std::max(worst_excess, err - std::max(1e-9, floor / phi));
  }
  CHECK(worst_lower <= 1e-9);
  CHECK(worst_excess <= 0.0);
}

TEST_CASE("unrefined rational approximation is already close") {
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.999})
    CHECK(normal_quantile_as241(p) == doctest::Approx(normal_quantile(p)).epsilon(1e-14));
}

TEST_CASE("mills_upper") {
  CHECK(mills_upper(0.0) == 0.5);
  CHECK(mills_upper(1.0) == doctest::Approx(0.3032653299).epsilon(1e-10));
  CHECK(mills_upper(3.0) == doctest::Approx(0.005554498).epsilon(1e-7));
  for (int i = 0; i <= 4000; ++i) {
    const double u = 0.01 * i;
    CHECK(normal_cdf(-u) <= mills_upper(u));
  }
}

TEST_CASE("gaussian coordinates") {
  const auto b = sample(DistributionKind::gaussian(2), StreamSpec{11, 1}, 1000000);
  CHECK(b.rows() == 1000000);
  CHECK(b.cols() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    const auto v = column(b, c);
    const double m = mean(v);
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    var /= v.size();
    CHECK(std::fabs(m) <= 0.004);
    CHECK(std::fabs(var - 1.0) <= 4.0 * std::sqrt(2.0 / v.size()));
  }
  // Coordinates are uncorrelated.
  const auto a = column(b, 0), c = column(b, 1);
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += a[i] * c[i];
  CHECK(std::fabs(cov / a.size()) <= 4.0 / std::sqrt(static_cast<double>(a.size())));
}

TEST_CASE("exponential coordinates") {
  const auto b = sample(DistributionKind::exponential(1), StreamSpec{11, 2}, 1000000);
  const auto v = column(b, 0);
  std::size_t above = 0;
  double m = 0.0, m2 = 0.0;
  for (double x : v) {
    above += std::fabs(x) > 1.0;
    m += x;
    m2 += x * x;
  }
  const double n = static_cast<double>(v.size());
  CHECK(std::fabs(above / n - std::exp(-1.0)) <= 0.0015);
  CHECK(std::fabs(m / n) <= 4.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(m2 / n - 2.0) <= 4.0 * std::sqrt(20.0 / n));  // Var(xi^2) = 24 - 4
}

TEST_CASE("chi-squared coordinates") {
  for (std::size_t k : {1u, 2u, 5u}) {
    const auto b = sample(DistributionKind::chi_squared(k), StreamSpec{11, 3 + k}, 1000000);
    const auto v = column(b, 0);
    const double m = mean(v);
    double var = 0.0;
    for (double x : v) {
      CHECK(x >= 0.0);
      var += (x - m) * (x - m);
    }
    var /= v.size();
    const double n = static_cast<double>(v.size());
    if (k == 2) CHECK(std::fabs(m - 2.0) <= 0.008);
    CHECK(std::fabs(m - k) <= 4.0 * std::sqrt(2.0 * k / n));
    // Var of the sample variance of chi2(k): (m4 - var^2) / n with m4 = 12k(k+4).
    CHECK(std::fabs(var - 2.0 * k) <= 4.0 * std::sqrt((12.0 * k * (k + 4) - 4.0 * k * k) / n));
  }
}

TEST_CASE("|xi| and (g1^2 + g2^2)/2 agree in law") {
  const std::size_t n = 1000000;
  auto e = column(sample(DistributionKind::exponential(1), StreamSpec{5, 100}, n), 0);
  const auto g = sample(DistributionKind::gaussian(2), StreamSpec{5, 101}, n);
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = std::fabs(e[i]);
    h[i] = 0.5 * (g.row(i)[0] * g.row(i)[0] + g.row(i)[1] * g.row(i)[1]);
  }
  std::sort(e.begin(), e.end());
  std::sort(h.begin(), h.end());
  CHECK(ks_distance(e, h) <= 0.003);
  CHECK(ks_distance(e, [](double x) { return 1.0 - std::exp(-x); }) <= 0.003);
}

TEST_CASE("chi-squared against its exact law") {
  boost::math::chi_squared_distribution<double> law(5.0);
  auto v = column(sample(DistributionKind::chi_squared(5), StreamSpec{5, 102}, 200000), 0);
  std::sort(v.begin(), v.end());
  CHECK(ks_distance(v, [&](double x) { return boost::math::cdf(law, x); }) <= 1.63 / std::sqrt(200000.0));
}

TEST_CASE("sampling is independent of worker count and chunking") {
  for (const auto& d : {DistributionKind::gaussian(7), DistributionKind::exponential(3), DistributionKind::chi_squared(3, 2)}) {
    StreamSpec s{42, 9, 1000};
    const auto one = sample(d, s, 25000, 1);
    const auto eight = sample(d, s, 25000, 8);
    CHECK(one == eight);
    s.chunk_size = 77;
    CHECK(sample(d, s, 25000, 3) == one);
    // Sample i is a function of i only: a shifted window matches.
    std::vector<double> tail(10 * d.dimension());
    std::vector<std::uint64_t> scratch;
    sample_rows(d, s, 12345, 10, tail, scratch);
    for (std::size_t i = 0; i < tail.size(); ++i) CHECK(tail[i] == one.data()[12345 * d.dimension() + i]);
  }
}

TEST_CASE("streams differ") {
  const auto a = sample(DistributionKind::gaussian(1), StreamSpec{1, 1}, 10000);
  const auto b = sample(DistributionKind::gaussian(1), StreamSpec{1, 2}, 10000);
  const auto c = sample(DistributionKind::gaussian(1), StreamSpec{2, 1}, 10000);
  CHECK(a != b);
  CHECK(a != c);
  double corr = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) corr += a.data()[i] * b.data()[i];
  CHECK(std::fabs(corr / 10000) < 0.04);
}

TEST_CASE("empty and oversized requests") {
  CHECK(sample(DistributionKind::gaussian(3), StreamSpec{}, 0).empty());
  CHECK_THROWS_AS(sample(DistributionKind::gaussian(1000), StreamSpec{}, 1000000, 1, 1 << 20), std::length_error);
}

TEST_CASE("distribution labels round trip") {
  CHECK(family_from_string("gaussian") == DistributionKind::Family::gaussian);
  CHECK(family_from_string(to_string(DistributionKind::Family::chi_squared)) == DistributionKind::Family::chi_squared);
  CHECK_THROWS(family_from_string("cauchy"));
  CHECK(DistributionKind::chi_squared(4).dimension() == 1);
  CHECK(DistributionKind::gaussian(5).dimension() == 5);
}
