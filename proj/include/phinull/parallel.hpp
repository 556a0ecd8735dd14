#pragma once

// Loop kernels with an OpenMP path and a serial reference path. Both run the
// same body per index, so results are identical whenever the body writes only
// to its own slot.

#include <cstddef>
#include <exception>
#include <mutex>

namespace phinull {

enum class Exec { serial, parallel };

/// Default policy used by the deciders.
inline constexpr Exec default_exec = Exec::parallel;

int max_threads();

template <class Body>
void for_each_index(Exec exec, std::ptrdiff_t count, Body&& body) {
  if (exec == Exec::serial || count < 2) {
    for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    return;
  }
  // Exceptions cannot cross an OpenMP region; keep the first by index.
  std::exception_ptr first_error;
  std::ptrdiff_t first_index = count;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (i < first_index) {
        first_index = i;
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace phinull
