#include <cmath>
#include <stdexcept>
#include <string>

#include "gaussdev/parallel.hpp"
#include "gaussdev/randcore.hpp"
#include "gaussdev/simd.hpp"

namespace gaussdev {

DistributionKind DistributionKind::gaussian(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gaussian: dimension must be positive");
  return {Family::gaussian, n, 1};
}

DistributionKind DistributionKind::exponential(std::size_t n) {
  if (n == 0) throw std::invalid_argument("exponential: dimension must be positive");
  return {Family::exponential, n, 1};
}

DistributionKind DistributionKind::chi_squared(std::size_t k, std::size_t n) {
  if (k == 0) throw std::invalid_argument("chi_squared: degrees of freedom must be positive");
  if (n == 0) throw std::invalid_argument("chi_squared: dimension must be positive");
  return {Family::chi_squared, n, k};
}

std::size_t DistributionKind::words_per_sample() const {
  return family == Family::chi_squared ? n * dof : n;
}

std::string DistributionKind::label() const {
  switch (family) {
    case Family::gaussian: return "gaussian(" + std::to_string(n) + ")";
    case Family::exponential: return "exponential(" + std::to_string(n) + ")";
    case Family::chi_squared:
      return "chi_squared(" + std::to_string(dof) + (n == 1 ? "" : ", " + std::to_string(n)) + ")";
  }
  return "?";
}

std::string to_string(DistributionKind::Family family) {
  switch (family) {
    case DistributionKind::Family::gaussian: return "gaussian";
    case DistributionKind::Family::exponential: return "exponential";
    case DistributionKind::Family::chi_squared: return "chi_squared";
  }
  return "?";
}

DistributionKind::Family family_from_string(const std::string& name) {
  if (name == "gaussian") return DistributionKind::Family::gaussian;
  if (name == "exponential") return DistributionKind::Family::exponential;
  if (name == "chi_squared") return DistributionKind::Family::chi_squared;
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

philox::Key StreamSpec::key() const {
  const std::uint64_t k = splitmix64(master_seed ^ splitmix64(stream_id ^ 0x5851F42D4C957F2Dull));
  return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

StreamSpec StreamSpec::substream(std::uint64_t tag) const {
  StreamSpec s = *this;
  s.stream_id = splitmix64(stream_id + 0x632BE59BD9B4E019ull * (tag + 1));
  return s;
}

std::uint64_t random_bits(const StreamSpec& stream, std::uint64_t index, std::uint32_t tag) {
  const philox::Counter ctr{0u, static_cast<std::uint32_t>(index),
                            static_cast<std::uint32_t>(index >> 32), tag};
  const auto r = philox::generate(ctr, stream.key());
  return (std::uint64_t{r[1]} << 32) | r[0];
}

SampleBlock::SampleBlock(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("SampleBlock: size mismatch");
}

void sample_rows(const DistributionKind& dist, const StreamSpec& stream, std::uint64_t first,
                 std::size_t count, std::span<double> out, std::vector<std::uint64_t>& scratch) {
  const std::size_t n = dist.dimension();
  if (out.size() != count * n) throw std::invalid_argument("sample_rows: output size mismatch");
  if (count == 0) return;
  const auto& k = simd::kernels();
  const std::size_t words = dist.words_per_sample();
  scratch.resize(count * words);
  k.philox_words(stream.key(), first, count, words, scratch.data());

  switch (dist.family) {
    case DistributionKind::Family::gaussian:
      k.normal_from_words(scratch.data(), count * n, out.data());
      break;
    case DistributionKind::Family::exponential:
      // Bit 0 carries the sign, bits 11..63 the magnitude.
      for (std::size_t i = 0; i < count * n; ++i) {
        const double mag = -std::log(open_unit(scratch[i]));
        out[i] = (scratch[i] & 1u) ? -mag : mag;
      }
      break;
    case DistributionKind::Family::chi_squared: {
      thread_local std::vector<double> g;
      g.resize(count * words);
      k.normal_from_words(scratch.data(), count * words, g.data());
      for (std::size_t j = 0; j < count * n; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < dist.dof; ++l) acc += g[j * dist.dof + l] * g[j * dist.dof + l];
        out[j] = acc;
      }
      break;
    }
  }
}

SampleBlock sample(const DistributionKind& dist, const StreamSpec& stream, std::size_t count,
                   unsigned workers, std::size_t memory_budget) {
  const std::size_t n = dist.dimension();
  if (count != 0 && n > memory_budget / sizeof(double) / count)
    throw std::length_error("sample: " + std::to_string(count) + " x " + std::to_string(n) +
                            " block exceeds the memory budget");
  SampleBlock block(count, n);
  auto data = block.data();
  parallel_chunks(count, stream.chunk_size, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> scratch;
    sample_rows(dist, stream, begin, end - begin, data.subspan(begin * n, (end - begin) * n),
                scratch);
  });
  return block;
}

}  // namespace gaussdev
