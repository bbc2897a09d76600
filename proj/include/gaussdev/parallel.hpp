#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gaussdev {

// Calls fn(begin, end) over [0, total) in chunks of `chunk`. Chunk c goes to
// worker c % workers; outputs must be written to disjoint, index-addressed
// slots so the result does not depend on the worker count.
template <typename Fn>
void parallel_chunks(std::size_t total, std::size_t chunk, unsigned workers, Fn&& fn) {
  if (total == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t nchunks = (total + chunk - 1) / chunk;
  const unsigned nthreads =
      static_cast<unsigned>(std::clamp<std::size_t>(workers == 0 ? 1 : workers, 1, nchunks));
  auto body = [&](unsigned w) {
    for (std::size_t c = w; c < nchunks; c += nthreads) {
      const std::size_t begin = c * chunk;
      fn(begin, std::min(total, begin + chunk));
    }
  };
  if (nthreads == 1) {
    body(0);
    return;
  }
  std::vector<std::exception_ptr> errors(nthreads);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned w = 0; w < nthreads; ++w) {
    pool.emplace_back([&, w] {
      try {
        body(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gaussdev
