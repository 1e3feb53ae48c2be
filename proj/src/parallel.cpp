#include "hogkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hogkit {

namespace {

std::atomic<std::size_t> g_override{0};

// Set on worker threads; nested parallel_for calls then run inline.
thread_local bool t_in_worker = false;

std::size_t env_threads() {
  const char* v = std::getenv("HOGKIT_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1) return 0;
  return static_cast<std::size_t>(n);
}

}  // namespace

std::size_t thread_count() {
  if (const std::size_t o = g_override.load(); o != 0) return o;
  if (const std::size_t e = env_threads(); e != 0) return e;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_count(std::size_t n) { g_override.store(n); }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn) {
  if (end <= begin) return;
  const std::size_t total = end - begin;
  const std::size_t workers = t_in_worker ? 1 : std::min(thread_count(), total);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mu;
  auto run_chunk = [&](std::size_t lo, std::size_t hi) {
    const bool was_worker = t_in_worker;
    t_in_worker = true;
    try {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
    t_in_worker = was_worker;
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  const std::size_t chunk = total / workers;
  const std::size_t extra = total % workers;
  std::size_t lo = begin;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t hi = lo + chunk + (w < extra ? 1 : 0);
    if (w + 1 == workers) {
      run_chunk(lo, hi);
    } else {
      threads.emplace_back(run_chunk, lo, hi);
    }
    lo = hi;
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hogkit
