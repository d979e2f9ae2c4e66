#include "c2approx/common.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

namespace c2approx {

namespace {
int g_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int default_thread_count() { return g_threads; }

void set_default_thread_count(int n) { g_threads = std::max(1, n); }

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads <= 0) threads = g_threads;
  threads = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(1, count)));
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      // fixed block partition: deterministic work assignment
      std::size_t lo = count * t / threads;
      std::size_t hi = count * (t + 1) / threads;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace c2approx
