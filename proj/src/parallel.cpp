#include "phinull/parallel.hpp"

#include <omp.h>

namespace phinull {

int max_threads() { return omp_get_max_threads(); }

}  // namespace phinull
