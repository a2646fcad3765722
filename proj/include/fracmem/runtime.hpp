#ifndef FRACMEM_RUNTIME_HPP
#define FRACMEM_RUNTIME_HPP

namespace fracmem {

inline constexpr const char* kVersion = "0.1.0";

// Applies the FRACMEM_THREADS environment variable (if set and positive) as a
// cap on the OpenMP thread count. Call once at program start.
void apply_thread_cap_from_env();

int thread_count();

}  // namespace fracmem

#endif
