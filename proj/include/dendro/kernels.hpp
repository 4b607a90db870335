#pragma once

#include <cstddef>

// Low-level array kernels behind the similarity and clustering hot loops.
//
// Every kernel exists in a scalar reference form and, where the build and the
// running CPU allow it, in a vectorised form (AVX2 on x86-64, NEON on
// AArch64). active_kernels() picks one implementation per process; the
// DENDRO_SIMD environment variable (scalar|avx2|neon|auto) can force a
// specific one, which the equivalence tests use to cross-check variants.
//
// Contracts shared by all implementations:
//  * inputs hold no NaNs (callers validate data at ingestion),
//  * reductions over an empty range are only defined for the sums (= 0);
//    reduce_min / reduce_max / argmax require n >= 1,
//  * argmax returns the index of the FIRST occurrence of the maximum, so
//    results are reproducible across variants,
//  * elementwise_min tolerates out aliasing a or b,
//  * min/max/argmax/elementwise_min match the scalar kernels bit for bit;
//    the summation kernels may reorder additions and are compared under a
//    small relative tolerance instead.

namespace dendro::kernels {

struct KernelTable {
    const char* name;
    double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
    double (*reduce_min)(const double* v, std::size_t n);
    double (*reduce_max)(const double* v, std::size_t n);
    double (*reduce_sum)(const double* v, std::size_t n);
    double (*reduce_sq_dev)(const double* v, std::size_t n, double mean);
    void (*elementwise_min)(const double* a, const double* b, double* out, std::size_t n);
    std::size_t (*argmax)(const double* v, std::size_t n);
};

/// Portable reference implementation. Always available.
const KernelTable& scalar_kernels();

/// Vector variants; null when the build does not include them.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// The table selected for this process (resolved once, thread-safe).
const KernelTable& active_kernels();

// Convenience wrappers for cold call sites. Hot loops should hoist
// `const auto& k = active_kernels();` out of the loop instead.

inline double sum_abs_diff(const double* a, const double* b, std::size_t n) {
    return active_kernels().sum_abs_diff(a, b, n);
}
inline double reduce_min(const double* v, std::size_t n) {
    return active_kernels().reduce_min(v, n);
}
inline double reduce_max(const double* v, std::size_t n) {
    return active_kernels().reduce_max(v, n);
}
inline double reduce_sum(const double* v, std::size_t n) {
    return active_kernels().reduce_sum(v, n);
}
inline double reduce_sq_dev(const double* v, std::size_t n, double mean) {
    return active_kernels().reduce_sq_dev(v, n, mean);
}
inline void elementwise_min(const double* a, const double* b, double* out, std::size_t n) {
    active_kernels().elementwise_min(a, b, out, n);
}
inline std::size_t argmax(const double* v, std::size_t n) {
    return active_kernels().argmax(v, n);
}

}  // namespace dendro::kernels
