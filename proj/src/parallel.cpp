#include "lrsdp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace lrsdp {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
  int n = g_max_threads.load();
  if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

void parallel_for(Index n, Index grain,
                  const std::function<void(Index, Index)>& body) {
  if (n <= 0) return;
  grain = std::max<Index>(1, grain);
  const Index chunks = (n + grain - 1) / grain;
  const int workers = static_cast<int>(
      std::min<Index>(chunks, static_cast<Index>(max_threads())));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::atomic<Index> next{0};
  auto run = [&]() {
    for (;;) {
      const Index c = next.fetch_add(1);
      if (c >= chunks) break;
      const Index begin = c * grain;
      body(begin, std::min(n, begin + grain));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace lrsdp
