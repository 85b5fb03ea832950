#ifndef BREATHER_CORE_PARALLEL_HPP
#define BREATHER_CORE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace breather {

inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{0};  // 0 = hardware concurrency
  return n;
}

inline void set_threads(unsigned n) { thread_setting() = n; }

inline unsigned thread_count() {
  unsigned n = thread_setting();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// Static block partition; each index is handled exactly once, so results
// written per index are independent of the thread count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t nt = std::min<std::size_t>(thread_count(), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
        for (std::size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace breather

#endif
