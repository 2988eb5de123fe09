#include "copolab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace copolab {

int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
  if (const char* env = std::getenv("COPOLARITY_LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace copolab
