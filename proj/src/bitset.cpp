#include "chainscope/bitset.hpp"

#include <algorithm>

#include "chainscope/kernels.hpp"

namespace chainscope {

void Bitset::clear() { std::fill(words_.begin(), words_.end(), 0); }

void Bitset::fill() {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    if (n_ % 64 != 0 && !words_.empty()) words_.back() = (std::uint64_t{1} << (n_ % 64)) - 1;
}

void Bitset::set_range(std::size_t lo, std::size_t hi) {
    if (lo >= hi) return;
    const std::size_t wl = lo >> 6, wh = (hi - 1) >> 6;
    const std::uint64_t first = ~std::uint64_t{0} << (lo & 63);
    const std::uint64_t last = ~std::uint64_t{0} >> (63 - ((hi - 1) & 63));
    if (wl == wh) {
        words_[wl] |= first & last;
        return;
    }
    words_[wl] |= first;
    for (std::size_t w = wl + 1; w < wh; ++w) words_[w] = ~std::uint64_t{0};
    words_[wh] |= last;
}

Bitset& Bitset::operator|=(const Bitset& o) {
    kernels::active().or_into(words_.data(), o.words_.data(), words_.size());
    return *this;
}

Bitset& Bitset::operator&=(const Bitset& o) {
    kernels::active().and_into(words_.data(), o.words_.data(), words_.size());
    return *this;
}

bool Bitset::intersects(const Bitset& o) const {
    return kernels::active().intersects(words_.data(), o.words_.data(), words_.size());
}

std::size_t Bitset::count() const { return kernels::active().popcount(words_.data(), words_.size()); }

bool Bitset::none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::size_t> Bitset::indices() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
}

}  // namespace chainscope
