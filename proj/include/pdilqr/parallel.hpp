#pragma once

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pdilqr {

/// Runs body(i) for i in [0, count) over `workers` OpenMP threads. Iterations
/// must be independent. The first exception thrown by any iteration is
/// rethrown on the calling thread after the loop joins.
template <typename Body>
void parallel_for(long count, int workers, Body&& body) {
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for num_threads(workers) schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

inline int hardware_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace pdilqr
