#pragma once

namespace dendro {

/// True when the running CPU (and OS) can execute AVX2 code.
bool cpu_supports_avx2();

/// True on AArch64, where the double-precision NEON lanes are baseline.
bool cpu_supports_neon();

}  // namespace dendro
