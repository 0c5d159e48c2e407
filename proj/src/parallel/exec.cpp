#include "cola/parallel/exec.hpp"

#include <string>

#include "cola/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cola::parallel {
namespace {

double tree_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return tree_sum(v, half) + tree_sum(v + half, n - half);
}

}  // namespace

Exec parse_exec(std::string_view s) {
  if (s == "serial") return Exec::kSerial;
  if (s == "parallel" || s == "omp") return Exec::kParallel;
  throw UsageError("unknown execution mode '" + std::string(s) + "' (serial|parallel)");
}

double pairwise_sum(std::span<const double> v) { return tree_sum(v.data(), v.size()); }

std::vector<double> pairwise_sum_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t width = rows.front().size();
  std::vector<double> out(width);
  std::vector<double> column(rows.size());
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][c];
    out[c] = pairwise_sum(column);
  }
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cola::parallel
