#include <cstdlib>
#include <stdexcept>

#include "gaussdev/simd.hpp"

namespace gaussdev::simd {

#ifndef GAUSSDEV_WITH_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

std::optional<Isa> isa_from_string(const std::string& name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Isa isa) {
  if (!cpu_supports(isa)) throw std::runtime_error("kernel variant " + to_string(isa) + " unavailable");
  return isa == Isa::avx2 ? *avx2_kernels() : scalar_kernels();
}

namespace {

const KernelTable& choose() {
  if (const char* env = std::getenv("GAUSSDEV_ISA")) {
    if (auto isa = isa_from_string(env); isa && cpu_supports(*isa)) return kernels(*isa);
  }
  return cpu_supports(Isa::avx2) ? *avx2_kernels() : scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& active = choose();
  return active;
}

Isa detected_isa() { return kernels().isa; }

}  // namespace gaussdev::simd
