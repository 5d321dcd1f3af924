#pragma once

#include <omp.h>

#include <cstddef>
#include <exception>
#include <limits>

namespace pcop::detail {

// OpenMP loop over [0, n). An exception thrown by body(i) cannot cross the
// parallel region, so it is captured and the one with the lowest index is
// rethrown afterwards; this matches what the serial loop would raise.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, int threads = 0) {
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(pcop_parallel_for_error)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pcop::detail
