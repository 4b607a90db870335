#include "dendro/cpu_features.hpp"

namespace dendro {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#if defined(__GNUC__) || defined(__clang__)
    // The builtin also checks OS support for the ymm state via xgetbv.
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
#else
    return false;
#endif
}

bool cpu_supports_neon() {
#if defined(__aarch64__)
    return true;
#else
    return false;
#endif
}

}  // namespace dendro
