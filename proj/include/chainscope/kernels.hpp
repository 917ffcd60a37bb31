#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the table is picked once at startup from the
// CPU features (override with CHAINSCOPE_SIMD=scalar|avx2).
//
// Both variants must produce bit-identical results: the arithmetic is limited
// to exactly rounded operations (sub, abs, min, max, compare), no FMA.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace chainscope::kernels {

struct KernelTable {
    const char* name;

    // out[i] = min(|c[i] - y|, 1 - |c[i] - y|) for c[i], y in [0, 1).
    void (*arc_distance_row)(const double* centers, std::size_t n, double y, double* out);
    // out[i] = |c[i] - y|.
    void (*line_distance_row)(const double* centers, std::size_t n, double y, double* out);
    // acc[i] = max(acc[i], src[i]).
    void (*max_into)(double* acc, const double* src, std::size_t n);
    // acc[i] += weight * src[i].
    void (*add_scaled_into)(double* acc, const double* src, double weight, std::size_t n);

    // Bit i of `bits` is set iff d[i] < threshold (resp. <=). `bits` holds
    // ceil(n / 64) words; the tail of the last word is cleared.
    void (*less_mask)(const double* d, std::size_t n, double threshold, std::uint64_t* bits);
    void (*less_equal_mask)(const double* d, std::size_t n, double threshold, std::uint64_t* bits);

    void (*or_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
    void (*and_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
    bool (*intersects)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
    std::size_t (*popcount)(const std::uint64_t* a, std::size_t words);
};

const KernelTable& scalar_table();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table();

// The table used by the library.
const KernelTable& active();

// Switch the active table by name ("scalar", "avx2"). Returns false if the
// requested variant is unavailable; the active table is then unchanged.
bool select(std::string_view name);

}  // namespace chainscope::kernels
