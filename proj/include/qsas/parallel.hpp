// parallel.hpp -- deterministic grid parallelism.
//
// Every parallel loop in this library writes results into preallocated
// slots indexed by grid position, so the output is a pure function of the
// inputs and independent of the number of threads.  grid_map(jobs == 1)
// runs the serial reference path; any other value dispatches to the OpenMP
// kernel (when compiled in).  Reductions over grid results are always done
// serially in index order afterwards, never inside the parallel region.

#ifndef QSAS_PARALLEL_HPP
#define QSAS_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <exception>

#ifdef QSAS_HAVE_OPENMP
#include <omp.h>
#endif

namespace qsas::par {

// Number of threads used when jobs <= 0 is requested.
inline int default_jobs() {
#ifdef QSAS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Serial reference kernel: fn(i) for i in [0, n), in order.
template <class F>
void grid_map_serial(std::size_t n, F&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

#ifdef QSAS_HAVE_OPENMP
// OpenMP kernel.  fn must only write to per-index slots.  Exceptions cannot
// cross an OpenMP region, so they are captured and the one with the lowest
// grid index is rethrown afterwards (the serial path throws at the lowest
// failing index too; which indices ran before the failure may differ).
template <class F>
void grid_map_openmp(std::size_t n, F&& fn, int jobs) {
  const int threads = jobs <= 0 ? default_jobs() : jobs;
  std::exception_ptr error = nullptr;
  std::int64_t error_index = -1;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qsas_grid_map_error)
      if (error_index < 0 || i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}
#endif

// Dispatch: jobs == 1 -> serial reference; otherwise OpenMP when available
// (falling back to serial in builds without it).
template <class F>
void grid_map(std::size_t n, F&& fn, int jobs) {
#ifdef QSAS_HAVE_OPENMP
  if (jobs == 1) {
    grid_map_serial(n, fn);
  } else {
    grid_map_openmp(n, fn, jobs);
  }
#else
  (void)jobs;
  grid_map_serial(n, fn);
#endif
}

// Compensated (Kahan) summation in index order; deterministic given the
// slot values, regardless of how many threads filled them.
inline double kahan_sum(const double* v, std::size_t n) {
  double sum = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = v[i] - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

} // namespace qsas::par

#endif // QSAS_PARALLEL_HPP
