#include "dendro/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cassert>
#include <cmath>

namespace dendro::kernels {
namespace {

double sum_abs_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
    return total;
}

double reduce_min_neon(const double* v, std::size_t n) {
    assert(n >= 1);
    if (n < 2) return v[0];
    float64x2_t acc = vld1q_f64(v);
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2) acc = vminq_f64(acc, vld1q_f64(v + i));
    double m = vminvq_f64(acc);
    for (; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

double reduce_max_neon(const double* v, std::size_t n) {
    assert(n >= 1);
    if (n < 2) return v[0];
    float64x2_t acc = vld1q_f64(v);
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(v + i));
    double m = vmaxvq_f64(acc);
    for (; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

double reduce_sum_neon(const double* v, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(v + i));
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += v[i];
    return total;
}

double reduce_sq_dev_neon(const double* v, std::size_t n, double mean) {
    const float64x2_t mu = vdupq_n_f64(mean);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(v + i), mu);
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = v[i] - mean;
        total += d * d;
    }
    return total;
}

void elementwise_min_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vminq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

std::size_t argmax_neon(const double* v, std::size_t n) {
    assert(n >= 1);
    // Same two-pass scheme as the AVX2 variant: exact max, then the first
    // index holding it.
    const double m = reduce_max_neon(v, n);
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] == m) return i;
    return n - 1;  // unreachable for NaN-free input
}

}  // namespace

const KernelTable* neon_kernels() {
    static const KernelTable table{
        "neon",
        sum_abs_diff_neon,
        reduce_min_neon,
        reduce_max_neon,
        reduce_sum_neon,
        reduce_sq_dev_neon,
        elementwise_min_neon,
        argmax_neon,
    };
    return &table;
}

}  // namespace dendro::kernels

#else  // !__aarch64__

namespace dendro::kernels {

const KernelTable* neon_kernels() { return nullptr; }

}  // namespace dendro::kernels

#endif
