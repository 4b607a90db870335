#include "dendro/kernels.hpp"

#if defined(DENDRO_HAVE_AVX2)

#include <immintrin.h>

#include <cassert>
#include <cmath>

namespace dendro::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_min_sd(lo, swapped));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign_bit, d0));
        acc1 = _mm256_add_pd(acc1, _mm256_andnot_pd(sign_bit, d1));
    }
    if (i + 4 <= n) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign_bit, d));
        i += 4;
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
    return total;
}

double reduce_min_avx2(const double* v, std::size_t n) {
    assert(n >= 1);
    if (n < 4) {
        double m = v[0];
        for (std::size_t i = 1; i < n; ++i)
            if (v[i] < m) m = v[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(v);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(v + i));
    double m = hmin(acc);
    for (; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

double reduce_max_avx2(const double* v, std::size_t n) {
    assert(n >= 1);
    if (n < 4) {
        double m = v[0];
        for (std::size_t i = 1; i < n; ++i)
            if (v[i] > m) m = v[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(v);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
    double m = hmax(acc);
    for (; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

double reduce_sum_avx2(const double* v, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(v + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(v + i + 4));
    }
    if (i + 4 <= n) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(v + i));
        i += 4;
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) total += v[i];
    return total;
}

double reduce_sq_dev_avx2(const double* v, std::size_t n, double mean) {
    const __m256d mu = _mm256_set1_pd(mean);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(v + i), mu);
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(v + i + 4), mu);
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
    }
    if (i + 4 <= n) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), mu);
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d, d));
        i += 4;
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = v[i] - mean;
        total += d * d;
    }
    return total;
}

void elementwise_min_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

std::size_t argmax_avx2(const double* v, std::size_t n) {
    assert(n >= 1);
    // Two passes keep the "first index of the maximum" contract: max values
    // combine exactly, so scanning for the first equal element reproduces the
    // scalar answer bit for bit.
    const double m = reduce_max_avx2(v, n);
    const __m256d vm = _mm256_set1_pd(m);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v + i), vm, _CMP_EQ_OQ));
        if (mask) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i)
        if (v[i] == m) return i;
    return n - 1;  // unreachable for NaN-free input
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{
        "avx2",
        sum_abs_diff_avx2,
        reduce_min_avx2,
        reduce_max_avx2,
        reduce_sum_avx2,
        reduce_sq_dev_avx2,
        elementwise_min_avx2,
        argmax_avx2,
    };
    return &table;
}

}  // namespace dendro::kernels

#else  // !DENDRO_HAVE_AVX2

namespace dendro::kernels {

const KernelTable* avx2_kernels() { return nullptr; }

}  // namespace dendro::kernels

#endif
