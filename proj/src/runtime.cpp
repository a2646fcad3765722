#include "fracmem/runtime.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace fracmem {

void apply_thread_cap_from_env() {
    const char* raw = std::getenv("FRACMEM_THREADS");
    if (!raw) return;
    try {
        const int cap = std::stoi(raw);
        if (cap >= 1) omp_set_num_threads(std::min(cap, omp_get_max_threads()));
    } catch (...) {
        // malformed value: leave the OpenMP default untouched
    }
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace fracmem
