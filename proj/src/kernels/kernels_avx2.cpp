#include "chainscope/kernels.hpp"

#if defined(CHAINSCOPE_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>

namespace chainscope::kernels {
namespace {

inline __m256d abs_pd(__m256d v) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, v);
}

void arc_distance_row(const double* centers, std::size_t n, double y, double* out) {
    const __m256d vy = _mm256_set1_pd(y);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(centers + i), vy));
        _mm256_storeu_pd(out + i, _mm256_min_pd(t, _mm256_sub_pd(one, t)));
    }
    for (; i < n; ++i) {
        const double t = std::fabs(centers[i] - y);
        out[i] = std::min(t, 1.0 - t);
    }
}

void line_distance_row(const double* centers, std::size_t n, double y, double* out) {
    const __m256d vy = _mm256_set1_pd(y);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(centers + i), vy)));
    for (; i < n; ++i) out[i] = std::fabs(centers[i] - y);
}

void max_into(double* acc, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(acc + i, _mm256_max_pd(_mm256_loadu_pd(src + i), _mm256_loadu_pd(acc + i)));
    for (; i < n; ++i) acc[i] = std::max(acc[i], src[i]);
}

void add_scaled_into(double* acc, const double* src, double weight, std::size_t n) {
    const __m256d w = _mm256_set1_pd(weight);
    std::size_t i = 0;
    // Separate mul and add: an FMA would round differently from the scalar path.
    for (; i + 4 <= n; i += 4) {
        const __m256d term = _mm256_mul_pd(w, _mm256_loadu_pd(src + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), term));
    }
    for (; i < n; ++i) {
        const double term = weight * src[i];
        acc[i] = acc[i] + term;
    }
}

template <int Predicate>
void mask_impl(const double* d, std::size_t n, double threshold, std::uint64_t* bits) {
    const __m256d thr = _mm256_set1_pd(threshold);
    const std::size_t words = (n + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
        const std::size_t base = w * 64;
        std::uint64_t word = 0;
        if (base + 64 <= n) {
            for (std::size_t k = 0; k < 64; k += 4) {
                const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(d + base + k), thr, Predicate);
                word |= static_cast<std::uint64_t>(_mm256_movemask_pd(cmp)) << k;
            }
        } else {
            for (std::size_t i = base; i < n; ++i) {
                const bool hit = Predicate == _CMP_LT_OQ ? d[i] < threshold : d[i] <= threshold;
                if (hit) word |= std::uint64_t{1} << (i - base);
            }
        }
        bits[w] = word;
    }
}

void less_mask(const double* d, std::size_t n, double threshold, std::uint64_t* bits) {
    mask_impl<_CMP_LT_OQ>(d, n, threshold, bits);
}

void less_equal_mask(const double* d, std::size_t n, double threshold, std::uint64_t* bits) {
    mask_impl<_CMP_LE_OQ>(d, n, threshold, bits);
}

void or_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(a, b));
    }
    for (; i < words; ++i) dst[i] |= src[i];
}

void and_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_and_si256(a, b));
    }
    for (; i < words; ++i) dst[i] &= src[i];
}

bool intersects(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        if (!_mm256_testz_si256(va, vb)) return true;
    }
    for (; i < words; ++i)
        if (a[i] & b[i]) return true;
    return false;
}

std::size_t popcount(const std::uint64_t* a, std::size_t words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i) total += static_cast<std::size_t>(_mm_popcnt_u64(a[i]));
    return total;
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{
        "avx2",    arc_distance_row, line_distance_row, max_into,   add_scaled_into, less_mask,
        less_equal_mask, or_into,    and_into,          intersects, popcount,
    };
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    return supported ? &table : nullptr;
}

}  // namespace chainscope::kernels

#else

namespace chainscope::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace chainscope::kernels

#endif
