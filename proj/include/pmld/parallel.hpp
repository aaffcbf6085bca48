#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmld {

// Execution policy for embarrassingly parallel task batches (Monte Carlo
// paths, optimizer multi-starts, finite-difference probes). Results are
// written into per-index slots and reduced afterwards in index order, so
// serial and OpenMP runs produce bit-identical output.
enum class ExecPolicy {
    serial,
    openmp,
};

inline ExecPolicy default_policy() {
#ifdef _OPENMP
    return ExecPolicy::openmp;
#else
    return ExecPolicy::serial;
#endif
}

// Serial reference: kept as its own code path so tests and the benchmark can
// compare it against the OpenMP kernel.
template <typename T, typename Fn>
std::vector<T> map_indexed_serial(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
}

template <typename T, typename Fn>
std::vector<T> map_indexed(std::size_t n, Fn&& fn, ExecPolicy policy = default_policy()) {
    if (policy == ExecPolicy::serial) return map_indexed_serial<T>(n, std::forward<Fn>(fn));
    std::vector<T> out(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    }
    return out;
}

}  // namespace pmld
