#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qbattery/dynamics.hpp"

namespace qbattery::cli {

/// prefix followed by the shortest round-trip representation of v.
std::string column_label(std::string_view prefix, double v);

/// zeta, t_P, t_P/tau, P_max, P_estimate, t_P small-zeta, Lambert and de Bruijn limits, P_avg_fwhm.
std::vector<double> peak_power_row(const DriveParams& p);

/// Evaluates fn(0..count-1) on up to `threads` workers. Results keep index
/// order; the first exception thrown by any task is rethrown.
template <class F>
auto parallel_map(std::size_t count, unsigned threads, F fn) -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace qbattery::cli
