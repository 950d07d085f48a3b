#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace backresp {

inline std::size_t default_thread_count() {
  const auto hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Splits [0, count) into `workers` contiguous chunks and runs
/// body(worker, begin, end) for each, in parallel. Chunk boundaries depend
/// only on (count, workers). Exceptions from workers are rethrown.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers <= 1) {
    if (count > 0) body(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace backresp
