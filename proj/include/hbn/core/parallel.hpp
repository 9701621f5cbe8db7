#pragma once

#include <cstddef>

namespace hbn::parallel {

// Global switch between the OpenMP kernels and the serial reference path.
// Both paths run the same per-element code, so results are bit-identical;
// the switch exists for testing and for the serial/parallel benchmark.
void set_enabled(bool on);
bool enabled();

int max_threads();

// Runs fn(i) for i in [0, n). Each index must write only its own outputs.
template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  if (enabled()) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace hbn::parallel
