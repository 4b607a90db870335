#include <cassert>
#include <cmath>

#include "dendro/kernels.hpp"

namespace dendro::kernels {
namespace {

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += std::fabs(a[i] - b[i]);
    return total;
}

double reduce_min_scalar(const double* v, std::size_t n) {
    assert(n >= 1);
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

double reduce_max_scalar(const double* v, std::size_t n) {
    assert(n >= 1);
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

double reduce_sum_scalar(const double* v, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += v[i];
    return total;
}

double reduce_sq_dev_scalar(const double* v, std::size_t n, double mean) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = v[i] - mean;
        total += d * d;
    }
    return total;
}

void elementwise_min_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

std::size_t argmax_scalar(const double* v, std::size_t n) {
    assert(n >= 1);
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar",
        sum_abs_diff_scalar,
        reduce_min_scalar,
        reduce_max_scalar,
        reduce_sum_scalar,
        reduce_sq_dev_scalar,
        elementwise_min_scalar,
        argmax_scalar,
    };
    return table;
}

}  // namespace dendro::kernels
