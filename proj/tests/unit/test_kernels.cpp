#include <doctest.h>

#include <random>

#include "chainscope/bitset.hpp"
#include "chainscope/kernels.hpp"

using namespace chainscope;

namespace {

struct Restore {
    const kernels::KernelTable* saved = &kernels::active();
    ~Restore() { kernels::select(saved->name); }
};

}  // namespace

TEST_CASE("scalar and AVX2 kernels agree bit for bit") {
    const kernels::KernelTable& s = kernels::scalar_table();
    const kernels::KernelTable* v = kernels::avx2_table();
    if (!v) {
        MESSAGE("AVX2 not available on this machine; only the scalar table is exercised");
        return;
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 63u, 64u, 65u, 127u, 1000u}) {
        CAPTURE(n);
        std::vector<double> c(n), a(n), b(n), ra(n), rb(n);
        for (auto& x : c) x = u(rng);
        // Include exact ties with the threshold.
        for (std::size_t i = 0; i < n; i += 7) c[i] = 0.25;
        const double y = u(rng);
        s.arc_distance_row(c.data(), n, y, ra.data());
        v->arc_distance_row(c.data(), n, y, rb.data());
        CHECK(ra == rb);
        s.line_distance_row(c.data(), n, y, ra.data());
        v->line_distance_row(c.data(), n, y, rb.data());
        CHECK(ra == rb);
        a = c;
        b = c;
        std::vector<double> other(n);
        for (auto& x : other) x = u(rng);
        s.max_into(a.data(), other.data(), n);
        v->max_into(b.data(), other.data(), n);
        CHECK(a == b);
        a = c;
        b = c;
        s.add_scaled_into(a.data(), other.data(), 0.37, n);
        v->add_scaled_into(b.data(), other.data(), 0.37, n);
        CHECK(a == b);
        const std::size_t words = (n + 63) / 64;
        std::vector<std::uint64_t> ma(words + 1, ~0ull), mb(words + 1, ~0ull);
        s.less_mask(c.data(), n, 0.25, ma.data());
        v->less_mask(c.data(), n, 0.25, mb.data());
        CHECK(std::equal(ma.begin(), ma.begin() + static_cast<long>(words), mb.begin()));
        s.less_equal_mask(c.data(), n, 0.25, ma.data());
        v->less_equal_mask(c.data(), n, 0.25, mb.data());
        CHECK(std::equal(ma.begin(), ma.begin() + static_cast<long>(words), mb.begin()));
        if (words) {
            std::uint64_t expect_tail = n % 64 ? (~0ull >> (64 - n % 64)) : ~0ull;
            CHECK((ma[words - 1] & ~expect_tail) == 0);
        }
    }
    for (std::size_t words : {0u, 1u, 3u, 4u, 9u, 33u}) {
        std::vector<std::uint64_t> x(words), y(words), xa, xb;
        for (auto& w : x) w = rng() & rng();
        for (auto& w : y) w = rng() & rng();
        CHECK(s.popcount(x.data(), words) == v->popcount(x.data(), words));
        CHECK(s.intersects(x.data(), y.data(), words) == v->intersects(x.data(), y.data(), words));
        xa = x;
        xb = x;
        s.or_into(xa.data(), y.data(), words);
        v->or_into(xb.data(), y.data(), words);
        CHECK(xa == xb);
        xa = x;
        xb = x;
        s.and_into(xa.data(), y.data(), words);
        v->and_into(xb.data(), y.data(), words);
        CHECK(xa == xb);
    }
}

TEST_CASE("kernel selection") {
    Restore restore;
    CHECK(kernels::select("scalar"));
    CHECK(std::string(kernels::active().name) == "scalar");
    CHECK_FALSE(kernels::select("sse9"));
    CHECK(std::string(kernels::active().name) == "scalar");
    if (kernels::avx2_table()) {
        CHECK(kernels::select("avx2"));
        CHECK(std::string(kernels::active().name) == "avx2");
    }
}

TEST_CASE("bitset operations") {
    Bitset a(130), b(130);
    a.set_range(3, 70);
    CHECK(a.count() == 67);
    CHECK(a.test(3));
    CHECK(a.test(69));
    CHECK_FALSE(a.test(70));
    b.set(129);
    CHECK_FALSE(a.intersects(b));
    b.set(10);
    CHECK(a.intersects(b));
    a |= b;
    CHECK(a.count() == 68);
    a &= b;
    CHECK(a.indices() == std::vector<std::size_t>{10, 129});
    a.fill();
    CHECK(a.all());
    CHECK(a.count() == 130);
    a.clear();
    CHECK(a.none());
}
