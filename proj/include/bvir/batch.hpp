#pragma once

// Batch evaluation of independent pure tasks: a serial reference loop and an
// OpenMP kernel. Both fill results by index, so for deterministic tasks the
// two paths produce bit-identical output; tests assert exactly that, and the
// benchmark target compares their throughput.

#include <cstddef>
#include <exception>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bvir::batch {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Serial reference implementation.
template <class R, class F>
std::vector<R> map_serial(std::size_t count, F&& task) {
  std::vector<R> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
  return out;
}

// OpenMP kernel. Tasks must be pure; the first thrown exception is
// re-thrown after the loop drains.
template <class R, class F>
std::vector<R> map_parallel(std::size_t count, F&& task) {
#ifdef _OPENMP
  std::vector<R> out(count);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = task(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
#else
  return map_serial<R>(count, std::forward<F>(task));
#endif
}

template <class R, class F>
std::vector<R> map(std::size_t count, F&& task, bool parallel = true) {
  if (parallel) return map_parallel<R>(count, task);
  return map_serial<R>(count, task);
}

}  // namespace bvir::batch
