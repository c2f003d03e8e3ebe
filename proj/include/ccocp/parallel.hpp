#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccocp {

// Deterministic blocked reduction. The sum is accumulated per fixed-size
// block and the block partials are combined in index order, so the result
// depends only on the block size, never on the number of threads.
inline constexpr std::size_t kReductionBlock = 4096;

template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t nb = (n + kReductionBlock - 1) / kReductionBlock;
  if (nb == 1) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += term(j);
    return s;
  }
  std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (!omp_in_parallel())
#endif
  for (long b = 0; b < static_cast<long>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) s += term(j);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Plain left-to-right sum, kept as the reference implementation for the
// parallel kernels and for the serial/parallel benchmark.
template <class Term>
double serial_sum(std::size_t n, Term&& term) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += term(j);
  return s;
}

inline int max_worker_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ccocp
