#include "fraclab/reduce.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace fraclab {

namespace {
std::atomic<int> g_thread_budget{0};  // 0 = unset, use default

int default_budget() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 16u));
}
}  // namespace

void set_thread_budget(int k) { g_thread_budget.store(k < 1 ? 1 : k); }

int thread_budget() {
  const int k = g_thread_budget.load();
  return k > 0 ? k : default_budget();
}

double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const int workers = std::min<std::size_t>(thread_budget(), count);
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  // chunk size depends only on count so the boundaries are worker-independent
  const std::size_t chunk = std::clamp<std::size_t>(count / 256, 16, 4096);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(chunk);
      if (b >= count) return;
      fn(b, std::min(count, b + chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

std::vector<double> parallel_map(std::size_t count,
                                 const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(count);
  parallel_chunks(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = fn(i);
  });
  return out;
}

double parallel_reduce(std::size_t count,
                       const std::function<double(std::size_t)>& fn) {
  const std::vector<double> vals = parallel_map(count, fn);
  return pairwise_sum(vals);
}

}  // namespace fraclab
