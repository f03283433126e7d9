#include "genscatter/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace genscatter {

namespace {
std::atomic<unsigned> override_threads{0};
}

unsigned default_threads() {
  if (unsigned o = override_threads.load()) return o;
  if (const char *env = std::getenv("GENSCATTER_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(unsigned n) { override_threads.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned threads) {
  if (threads == 0) threads = default_threads();
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto &t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

} // namespace genscatter
