#include <doctest.h>

#include "chainscope/error.hpp"
#include "chainscope/product_laws.hpp"

using namespace chainscope;

namespace {

const LawCheck& law(const ProductLawReport& r, const std::string& prefix) {
    for (const auto& c : r.checks)
        if (c.law.rfind(prefix, 0) == 0) return c;
    FAIL("no law starting with " << prefix);
    return r.checks.front();
}

}  // namespace

TEST_CASE("rotation(1/3) x rotation(1/2) has product recurrence lcm(3, 2)") {
    const ProductLawReport r =
        check_product_laws(make_rotation(parse_real("1/3")), make_rotation(parse_real("1/2")), 48, 48, 0.005, 0.05);
    CHECK(r.product_r == 6);
    CHECK(r.all_hold());
    for (const auto& c : r.checks) {
        CAPTURE(c.law);
        CHECK(c.evaluated > 0);
    }
}

TEST_CASE("product laws on the zoo") {
    for (double eps : {0.02, 0.05}) {
        const ProductLawReport rr = check_product_laws(make_rotation(parse_real("golden")),
                                                       make_rotation(parse_real("sqrt2-1")), 64, 64, eps, 0.15);
        CHECK(rr.all_hold());
        const ProductLawReport dr =
            check_product_laws(make_doubling(), make_rotation(parse_real("golden")), 64, 64, eps, 0.15);
        CHECK(dr.all_hold());
    }
}

TEST_CASE("f x f mixes exactly as fast as f") {
    const ProductLawReport r = check_product_laws(make_doubling(), make_doubling(), 64, 64, 0.03, 0.1);
    const LawCheck& m = law(r, "m(fxg)");
    CHECK(m.holds());
    CHECK(m.worst_lhs == m.worst_rhs);
}

TEST_CASE("power laws") {
    for (double eps : {0.1, 0.05}) {
        const ProductLawReport r = check_power_laws(make_doubling(), 2, 512, eps, 0.15);
        CAPTURE(eps);
        CHECK(r.all_hold());
        CHECK(r.raw_power_recurrence.has_value());
    }
    const ProductLawReport rot = check_power_laws(make_rotation(parse_real("golden")), 3, 512, 0.03, 0.15);
    CHECK(rot.all_hold());
    CHECK_THROWS_AS(check_power_laws(make_doubling(), 0, 64, 0.1, 0.2), Error);
}
