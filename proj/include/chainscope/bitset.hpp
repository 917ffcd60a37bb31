#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace chainscope {

// Fixed-size dynamic bitset. Bits past size() in the last word are always zero,
// so word-wise equality and popcount need no masking.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    std::size_t word_count() const { return words_.size(); }
    std::uint64_t* data() { return words_.data(); }
    const std::uint64_t* data() const { return words_.data(); }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void clear();
    void fill();
    void set_range(std::size_t lo, std::size_t hi);  // [lo, hi)

    Bitset& operator|=(const Bitset& o);
    Bitset& operator&=(const Bitset& o);
    bool intersects(const Bitset& o) const;
    std::size_t count() const;
    bool all() const { return count() == n_; }
    bool none() const;

    bool operator==(const Bitset& o) const { return n_ == o.n_ && words_ == o.words_; }

    std::vector<std::size_t> indices() const;

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word) {
                const int b = __builtin_ctzll(word);
                f(w * 64 + static_cast<std::size_t>(b));
                word &= word - 1;
            }
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace chainscope
