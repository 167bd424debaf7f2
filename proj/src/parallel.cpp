#include "wavelab/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wavelab {

namespace {
std::atomic<bool> g_enabled{true};
}

namespace threads {

void set_enabled(bool on) { g_enabled.store(on); }

bool enabled() { return g_enabled.load(); }

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n >= 1) omp_set_num_threads(n);
#endif
  set_enabled(n != 1);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace threads

void parallel_for_impl(int n, const std::function<void(int)>& body) {
#ifdef _OPENMP
  if (g_enabled.load() && n > 1) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace wavelab
