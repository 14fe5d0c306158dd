#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace betax::par {

inline int default_threads() {
  if (const char* env = std::getenv("BETA_EXTREMES_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

inline int resolve_threads(int requested) {
  return requested > 0 ? requested : default_threads();
}

// Fixed chunk width used by the deterministic reductions.
inline constexpr std::int64_t kSumChunk = 1 << 16;

// Runs fn(chunk_index, begin, end) over [0, count) split into fixed-size
// chunks.  The chunk layout does not depend on the worker count, so any
// aggregation indexed by chunk is bit-reproducible under 1..N threads.
template <class Fn>
void for_chunks(std::int64_t count, std::int64_t chunk, int threads, Fn&& fn) {
  if (count <= 0) return;
  const std::int64_t nchunks = (count + chunk - 1) / chunk;
  const int nthreads =
      static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), nchunks));
  if (nthreads <= 1) {
    for (std::int64_t c = 0; c < nchunks; ++c)
      fn(c, c * chunk, std::min(count, (c + 1) * chunk));
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= nchunks) return;
        fn(c, c * chunk, std::min(count, (c + 1) * chunk));
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace betax::par
