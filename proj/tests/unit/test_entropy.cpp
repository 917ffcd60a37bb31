#include <doctest.h>

#include <cmath>

#include "chainscope/entropy.hpp"
#include "chainscope/error.hpp"
#include "chainscope/oracles.hpp"

using namespace chainscope;

namespace {

std::vector<double> dyadic(int from, int to) {
    std::vector<double> v;
    for (int i = from; i <= to; ++i) v.push_back(std::ldexp(1.0, -i));
    return v;
}

EntropyReport doubling_oracle_bound(const std::vector<double>& deltas) {
    std::vector<EntropyGridPoint> grid;
    for (double delta : deltas)
        for (double eps : {delta * 1e-3, delta * 1e-6}) {
            EntropyGridPoint p;
            p.delta = delta;
            p.eps = eps;
            p.m = doubling_mixing_time(exact_rational(eps), exact_rational(delta));
            grid.push_back(p);
        }
    return entropy_lower_bound(grid, 1);
}

}  // namespace

TEST_CASE("covering numbers") {
    const SystemSpec circle = make_rotation(parse_real("1/3"));
    const auto c = nspan_counts(circle, {0.3, 0.25, 0.05});
    CHECK(c[0].count == 2);
    CHECK(c[1].count == 2);
    CHECK(c[2].count == 10);
    CHECK(c[0].exact);
    const auto s = nspan_counts(make_finite_shift({{1, 1}, {1, 1}}, 3), {0.2});
    CHECK(s[0].count == 4);
    const auto i = nspan_counts(make_tent_map(), {0.25, 0.1});
    CHECK(i[0].count == 2);
    CHECK(i[1].count == 5);
}

TEST_CASE("box dimension fit") {
    const auto alphas = dyadic(3, 10);
    CHECK(box_dimension_estimate(nspan_counts(make_doubling(), alphas)).d == doctest::Approx(1).epsilon(0.05));
    CHECK(box_dimension_estimate(nspan_counts(make_odometer(3), dyadic(4, 11))).d == doctest::Approx(0).epsilon(0.05));
    const auto torus = nspan_counts(make_product(make_doubling(), make_doubling()), alphas);
    CHECK(box_dimension_estimate(torus).d == doctest::Approx(2).epsilon(0.05));
    CHECK_FALSE(torus[0].exact);
    CHECK_THROWS_AS(box_dimension_estimate(nspan_counts(make_doubling(), {0.1, 0.1, 0.1, 0.1})), Error);
}

TEST_CASE("entropy bound from oracle mixing times") {
    const double log2 = std::log(2.0);
    const EntropyReport d = doubling_oracle_bound({1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    CHECK(std::fabs(d.bound_finest_delta - log2) / log2 < 0.05);
    // Sandwich: below h + 0.05 once the ceiling sawtooth is small.
    CHECK(doubling_oracle_bound({3e-5, 1e-5, 3e-6, 1e-6, 1e-7}).bound <= log2 + 0.05);
    CHECK(d.bound_bits() == doctest::Approx(d.bound / log2));

    std::vector<EntropyGridPoint> rot;
    for (double delta : {1e-1, 1e-2, 1e-3})
        for (double eps : {1e-3, 1e-5}) {
            EntropyGridPoint p;
            p.delta = delta;
            p.eps = eps;
            p.m = static_cast<std::uint64_t>(rotation_mixing_time(exact_rational(eps)));
            rot.push_back(p);
        }
    const EntropyReport r = entropy_lower_bound(rot, 1);
    CHECK(r.bound <= 0.05);
    CHECK(r.per_delta.front().eps == 1e-5);

    std::vector<EntropyGridPoint> flat;
    for (double delta : {1e-1, 1e-2, 1e-3}) {
        EntropyGridPoint p;
        p.delta = delta;
        p.eps = 1e-4;
        p.m = 7;
        flat.push_back(p);
    }
    CHECK(entropy_lower_bound(flat, 1).bound == doctest::Approx(std::log(1000.0) / 7));
    CHECK_THROWS_AS(entropy_lower_bound({}, 1), Error);
}

TEST_CASE("entropy bound from transition graphs") {
    const double log2 = std::log(2.0);
    const EntropyReport g = entropy_from_graphs(make_doubling(), {1e-1, 1e-2, 1e-3}, {1.0 / 1024, 1.0 / 2048},
                                                GraphMode::Inner, 4096, {}, 1);
    CHECK(std::fabs(g.bound_finest_delta - log2) / log2 < 0.15);
    // Smaller eps never lowers m on a fixed cover.
    for (const auto& a : g.grid)
        for (const auto& b : g.grid)
            if (a.delta == b.delta && a.eps < b.eps && a.m && b.m) CHECK(*a.m >= *b.m);
    // h decreases as m grows.
    for (const auto& a : g.grid)
        for (const auto& b : g.grid)
            if (a.delta == b.delta && a.m && b.m && *a.m > *b.m) CHECK(a.h_bound <= b.h_bound);
    CHECK_THROWS_AS(entropy_from_graphs(make_doubling(), {1e-3}, {1e-2}, GraphMode::Outer, 256, {}, 1), Error);
}

TEST_CASE("walk-count growth rate") {
    CHECK(path_growth_rate(ChainGraph::from_lists({{0, 1}, {0, 1}})) == doctest::Approx(std::log(2.0)));
    CHECK(path_growth_rate(ChainGraph::from_lists({{1}, {2}, {0}})) == doctest::Approx(0).epsilon(1e-9));
    CHECK(path_growth_rate(ChainGraph::from_lists({{1}, {}})) == 0);
    const SystemSpec f = make_doubling();
    const Cover c = build_cover(f, 256);
    const double eps = std::ldexp(1.0, -10);
    // Each cell's image touches three cells of the dyadic grid, so walks grow like 3^n.
    const double outer = path_growth_rate(build_chain_graph(c, f, eps, GraphMode::Outer));
    CHECK(outer == doctest::Approx(std::log(3.0)).epsilon(0.03));
    for (double e : {0.01, 0.05}) {
        const double o = path_growth_rate(build_chain_graph(c, f, e, GraphMode::Outer));
        const double i = path_growth_rate(build_chain_graph(c, f, e, GraphMode::Inner));
        CHECK(i <= o + 1e-12);
    }
}
