#ifndef COMBUSTION1D_PARALLEL_HPP
#define COMBUSTION1D_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace combustion1d {

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Each index runs
/// exactly once; the first exception is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(body);
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

} // namespace combustion1d

#endif // COMBUSTION1D_PARALLEL_HPP
