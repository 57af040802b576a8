#include "mvd/parallel.hpp"

#include <Eigen/Core>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mvd {

namespace {
std::atomic<int> g_threads{1};
}

int solver_threads() { return g_threads.load(); }

void set_solver_threads(int threads) {
  g_threads.store(threads < 1 ? 1 : threads);
}

void parallel_ranges(int n, const std::function<void(int, int)>& fn) {
  int t = std::min(solver_threads(), n);
  if (t <= 1 || n < 64) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::exception_ptr error;
  std::mutex error_mutex;
  int chunk = (n + t - 1) / t;
  for (int k = 0; k < t; ++k) {
    int begin = k * chunk;
    int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double parallel_sum(int n, const std::function<double(int)>& per_index) {
  Eigen::VectorXd vals(n);
  parallel_ranges(n, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) vals[i] = per_index(i);
  });
  double total = 0;  // ordered reduction keeps runs bit-identical
  for (int i = 0; i < n; ++i) total += vals[i];
  return total;
}

}  // namespace mvd
