#pragma once

#include <cstdint>
#include <thread>
#include <vector>

// Minimal deterministic parallelism, mirroring Eigen::setNbThreads. Work items
// write to preassigned slots, so results do not depend on the thread count.

namespace he {

int num_threads();
void set_num_threads(int n);

namespace detail {
inline int& thread_count_ref() {
  static int count = 1;
  return count;
}
}  // namespace detail

inline int num_threads() { return detail::thread_count_ref(); }

inline void set_num_threads(int n) {
  detail::thread_count_ref() = n < 1 ? 1 : n;
}

// Runs f(i) for i in [0, n). Static contiguous partition; f must only touch
// state owned by item i.
template <class F>
void parallel_for(std::int64_t n, F&& f) {
  const int workers = num_threads();
  if (workers <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  const int used = static_cast<int>(std::min<std::int64_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (int w = 0; w < used; ++w) {
    const std::int64_t lo = n * w / used;
    const std::int64_t hi = n * (w + 1) / used;
    pool.emplace_back([&f, lo, hi] {
      for (std::int64_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace he
