// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

namespace denslab {

// Number of worker threads used by data-parallel loops. Loops only write
// per-index outputs; every reduction in the library is performed serially
// afterwards, so results do not depend on this setting.
void set_num_threads(int n);
int num_threads();

// The first exception raised by any iteration is rethrown on the caller.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  std::exception_ptr error;
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(denslab_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace denslab
