#include "adagcn/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace adagcn {

namespace {

int read_thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  int cap = static_cast<int>(hw);
  if (const char* env = std::getenv("ADAGCN_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) cap = static_cast<int>(v);
  }
  return std::max(cap, 1);
}

}  // namespace

int max_threads() {
  static int cap = read_thread_cap();
  return cap;
}

void parallel_for(std::size_t n, std::size_t min_parallel,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  int nthreads = max_threads();
  if (nthreads <= 1 || n < min_parallel || n < 2) {
    fn(0, n);
    return;
  }
  std::size_t workers = std::min<std::size_t>(nthreads, n);
  std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) {
    std::size_t begin = t * chunk;
    if (begin >= n) break;
    std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(0, std::min(n, chunk));
  for (auto& th : pool) th.join();
}

}  // namespace adagcn
