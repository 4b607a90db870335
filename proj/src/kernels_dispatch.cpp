#include <cstdlib>
#include <string>

#include "dendro/cpu_features.hpp"
#include "dendro/kernels.hpp"
#include "dendro/log.hpp"

namespace dendro::kernels {
namespace {

const KernelTable& best_available() {
    if (const KernelTable* t = avx2_kernels(); t && cpu_supports_avx2()) return *t;
    if (const KernelTable* t = neon_kernels(); t && cpu_supports_neon()) return *t;
    return scalar_kernels();
}

const KernelTable& resolve() {
    const char* env = std::getenv("DENDRO_SIMD");
    if (!env || std::string(env) == "auto") return best_available();
    const std::string wanted(env);
    if (wanted == "scalar") return scalar_kernels();
    if (wanted == "avx2") {
        if (const KernelTable* t = avx2_kernels(); t && cpu_supports_avx2()) return *t;
        log_warn("DENDRO_SIMD=avx2 requested but AVX2 is unavailable; falling back");
        return best_available();
    }
    if (wanted == "neon") {
        if (const KernelTable* t = neon_kernels(); t && cpu_supports_neon()) return *t;
        log_warn("DENDRO_SIMD=neon requested but NEON is unavailable; falling back");
        return best_available();
    }
    log_warn("unrecognised DENDRO_SIMD value '" + wanted + "'; using auto selection");
    return best_available();
}

}  // namespace

const KernelTable& active_kernels() {
    static const KernelTable& table = resolve();
    return table;
}

}  // namespace dendro::kernels
