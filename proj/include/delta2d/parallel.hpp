#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace delta2d {

// Applies f(i) for i in [0, count) with results stored by index; the caller
// reduces sequentially in index order, so totals are identical for any job
// count.
template <class T, class F>
std::vector<T> parallel_map(long long count, int jobs, F&& f) {
  std::vector<T> out(static_cast<size_t>(count));
  if (jobs <= 1 || count <= 1) {
    for (long long i = 0; i < count; ++i) out[size_t(i)] = f(i);
    return out;
  }
  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      long long i = next.fetch_add(1);
      if (i >= count) return;
      out[size_t(i)] = f(i);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min<long long>(jobs, count);
  pool.reserve(size_t(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace delta2d
