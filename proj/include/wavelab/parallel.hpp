#pragma once

#include <functional>

namespace wavelab::threads {

// Global switch between the OpenMP kernels and serial execution. Kernels are
// written so results are bit-identical either way: only pointwise maps and
// independent-column work run in parallel, never floating-point reductions.
void set_enabled(bool on);
bool enabled();
void set_num_threads(int n);  // n <= 1 disables parallel execution
int max_threads();

}  // namespace wavelab::threads

namespace wavelab {

void parallel_for_impl(int n, const std::function<void(int)>& body);

template <class F>
void parallel_for(int n, F&& body) {
  parallel_for_impl(n, std::function<void(int)>(std::forward<F>(body)));
}

}  // namespace wavelab
