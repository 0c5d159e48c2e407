#pragma once

// Per-sample loops with a serial reference and an OpenMP version. Both write
// results into per-index slots and reduce with the same fixed pairwise tree,
// so they agree bit for bit regardless of thread count or scheduling.

#include <cstddef>
#include <exception>
#include <span>
#include <string_view>
#include <vector>

namespace cola::parallel {

enum class Exec { kSerial, kParallel };

Exec parse_exec(std::string_view s);

// Sum in a fixed balanced tree (leaves of 8 summed left to right).
double pairwise_sum(std::span<const double> v);

// Element-wise pairwise sum of equally sized rows.
std::vector<double> pairwise_sum_rows(const std::vector<std::vector<double>>& rows);

int max_threads();

// Calls fn(i) for i in [0, n). In parallel mode, if any call throws, the
// exception from the smallest failing index is rethrown, matching the serial
// loop's first failure.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& fn) {
  if (exec == Exec::kSerial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace cola::parallel
