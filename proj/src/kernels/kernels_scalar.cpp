#include "chainscope/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace chainscope::kernels {
namespace {

void arc_distance_row(const double* centers, std::size_t n, double y, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::fabs(centers[i] - y);
        out[i] = std::min(t, 1.0 - t);
    }
}

void line_distance_row(const double* centers, std::size_t n, double y, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(centers[i] - y);
}

void max_into(double* acc, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], src[i]);
}

void add_scaled_into(double* acc, const double* src, double weight, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double term = weight * src[i];
        acc[i] = acc[i] + term;
    }
}

template <typename Cmp>
void mask_impl(const double* d, std::size_t n, double threshold, std::uint64_t* bits, Cmp cmp) {
    const std::size_t words = (n + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t word = 0;
        const std::size_t base = w * 64;
        const std::size_t end = std::min(n, base + 64);
        for (std::size_t i = base; i < end; ++i)
            if (cmp(d[i], threshold)) word |= std::uint64_t{1} << (i - base);
        bits[w] = word;
    }
}

void less_mask(const double* d, std::size_t n, double threshold, std::uint64_t* bits) {
    mask_impl(d, n, threshold, bits, [](double a, double t) { return a < t; });
}

void less_equal_mask(const double* d, std::size_t n, double threshold, std::uint64_t* bits) {
    mask_impl(d, n, threshold, bits, [](double a, double t) { return a <= t; });
}

void or_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i) dst[i] |= src[i];
}

void and_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i) dst[i] &= src[i];
}

bool intersects(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i)
        if (a[i] & b[i]) return true;
    return false;
}

std::size_t popcount(const std::uint64_t* a, std::size_t words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i) total += static_cast<std::size_t>(std::popcount(a[i]));
    return total;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",        arc_distance_row, line_distance_row, max_into, add_scaled_into,
        less_mask,       less_equal_mask,  or_into,           and_into, intersects,
        popcount,
    };
    return table;
}

}  // namespace chainscope::kernels
