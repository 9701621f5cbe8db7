#include "hbn/core/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hbn::parallel {

namespace {
bool g_enabled = true;
}

void set_enabled(bool on) { g_enabled = on; }

bool enabled() {
#ifdef _OPENMP
  // Nested regions would only add overhead; inner loops fall back to serial.
  return g_enabled && !omp_in_parallel();
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hbn::parallel
