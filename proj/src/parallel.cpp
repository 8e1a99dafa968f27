#include "eagle/parallel.hpp"

#include <cstdlib>
#include <string>

#include "eagle/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eagle {

namespace {
#ifdef _OPENMP
int default_threads = 0;
#endif
} // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_cap(int n) {
#ifdef _OPENMP
    if (default_threads == 0) default_threads = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : default_threads);
#else
    (void)n;
#endif
}

void apply_thread_env() {
    const char* value = std::getenv("EAGLE_THREADS");
    if (value == nullptr || *value == '\0') return;
    char* end = nullptr;
    const long parsed = std::strtol(value, &end, 10);
    if (end == value || *end != '\0' || parsed < 0) {
        throw ParameterError(std::string("EAGLE_THREADS must be a nonnegative integer, got '") +
                             value + "'");
    }
    set_thread_cap(static_cast<int>(parsed));
}

} // namespace eagle
