#pragma once

#include <cstddef>
#include <cstdlib>
#include <span>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace paretobin {

// Worker count resolution: explicit argument > PARETOBIN_WORKERS env > OpenMP default.
inline int default_workers() {
  if (const char* env = std::getenv("PARETOBIN_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int resolve_workers(int workers) { return workers > 0 ? workers : default_workers(); }

// Runs body(i) for i in [0, n). Results must be written to slots indexed by i
// so the outcome is independent of the thread count. workers <= 1 runs inline.
template <class F>
void parallel_for(std::size_t n, int workers, F&& body) {
  workers = resolve_workers(workers);
#if defined(_OPENMP)
  if (workers > 1 && n > 1) {
    #pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

// Pairwise summation over a fixed input order: deterministic regardless of how
// the values were produced, and far more accurate than a running sum.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v.data(), v.size()));
}

}  // namespace paretobin
