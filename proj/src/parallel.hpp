#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace egosim::detail {

// Static range split; fn(worker, begin, end) runs on disjoint [begin,end)
// slices, worker < threads. Callers are responsible for making the merged
// result independent of the split. Small inputs stay on the calling thread.
inline void run_chunked_indexed(
    std::size_t n, unsigned threads,
    const std::function<void(unsigned, std::size_t, std::size_t)>& fn) {
  if (threads <= 1 || n < 2048) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    std::size_t begin = n * w / threads;
    std::size_t end = n * (w + 1) / threads;
    if (begin < end)
      pool.emplace_back([fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

inline void run_chunked(std::size_t n, unsigned threads,
                        const std::function<void(std::size_t, std::size_t)>& fn) {
  run_chunked_indexed(n, threads,
                      [&fn](unsigned, std::size_t b, std::size_t e) { fn(b, e); });
}

}  // namespace egosim::detail
