#include "qmass/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qmass {

int max_threads() {
#ifdef _OPENMP
  int nt = omp_get_max_threads();
#else
  int nt = 1;
#endif
  if (const char* env = std::getenv("QMASS_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < nt) nt = cap;
  }
  return nt;
}

}  // namespace qmass
