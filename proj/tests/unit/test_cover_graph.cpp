#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "chainscope/chain_graph.hpp"
#include "chainscope/cover.hpp"
#include "chainscope/error.hpp"
#include "chainscope/graph_io.hpp"
#include "chainscope/structure.hpp"

using namespace chainscope;

namespace {

bool subset(const ChainGraph& a, const ChainGraph& b) {
    for (std::size_t u = 0; u < a.n; ++u)
        for (auto v : a.successors(u))
            if (!b.has_edge(u, v)) return false;
    return true;
}

bool reaches(const ChainGraph& g, std::size_t from, std::size_t to) {
    Bitset seen(g.n), frontier(g.n), next(g.n);
    frontier.set(from);
    seen.set(from);
    while (!frontier.none()) {
        image(g, frontier, next);
        if (next.test(to)) return true;
        Bitset fresh = next;
        for (std::size_t v : next.indices())
            if (seen.test(v)) fresh.reset(v);
        seen |= fresh;
        frontier = fresh;
    }
    return false;
}

std::size_t cell_of(const Cover& c, double x) {
    // Nearest center on a circle grid with centers i/n.
    const double n = static_cast<double>(c.size());
    return static_cast<std::size_t>(std::llround(wrap_unit(x) * n)) % c.size();
}

}  // namespace

TEST_CASE("uniform covers") {
    const SystemSpec circle = make_rotation(parse_real("1/3"));
    const Cover c4 = build_cover(circle, 4);
    CHECK(c4.size() == 4);
    CHECK(c4.rho == doctest::Approx(0.125));
    CHECK(c4.coords[0] == std::vector<double>{0, 0.25, 0.5, 0.75});
    const Cover c2 = build_cover(circle, 2);
    CHECK(c2.coords[0] == std::vector<double>{0, 0.5});
    CHECK(c2.rho == doctest::Approx(0.25));
    const Cover shift = build_cover(make_finite_shift({{1, 1}, {1, 1}}, 2), 4);
    CHECK(shift.size() == 4);
    CHECK(shift.rho == doctest::Approx(0.25));
    CHECK(shift.exact);
    CHECK_THROWS_AS(build_cover(circle, 1), Error);
    CHECK_THROWS_AS(build_cover(make_odometer(3), 5), Error);
    CHECK_THROWS_AS(build_cover(make_two_circle(0.25), 6 + 1), Error);
}

TEST_CASE("covers cover the space") {
    std::mt19937_64 rng(9);
    for (const SystemSpec& f : {make_doubling(), make_square_map(), make_two_circle(0.3),
                                make_product(make_doubling(), make_tent_map())}) {
        const Cover c = build_cover(f, f.kind == SystemKind::Product ? 256 : 64);
        std::vector<double> row(c.size());
        for (int i = 0; i < 2000; ++i) {
            const Point p = random_point(f, rng);
            distance_row(f, c, p, row.data());
            CHECK(*std::min_element(row.begin(), row.end()) <= c.rho * (1 + 1e-12));
        }
    }
}

TEST_CASE("edge predicate examples") {
    const SystemSpec quarter = make_rotation(parse_real("1/4"));
    const ChainGraph cyc = build_chain_graph(build_cover(quarter, 4), quarter, 0.01, GraphMode::Inner);
    CHECK(cyc.to_lists() == std::vector<std::vector<std::uint32_t>>{{1}, {2}, {3}, {0}});
    const SystemSpec dbl = make_doubling();
    const ChainGraph k2 = build_chain_graph(build_cover(dbl, 2), dbl, 0.01, GraphMode::Outer);
    CHECK(k2.edge_count() == 4);
    for (const SystemSpec& f : {make_doubling(), make_tent_map(), make_two_circle(0.25)}) {
        const Cover c = build_cover(f, 16);
        const double eps = f.diameter_D + (1 + f.lipschitz_c) * c.rho;
        CHECK(build_chain_graph(c, f, eps, GraphMode::Outer).edge_count() == c.size() * c.size());
    }
    CHECK_THROWS_AS(build_chain_graph(build_cover(dbl, 4), dbl, 0, GraphMode::Outer), Error);
}

TEST_CASE("certified bracket") {
    auto [lo, hi] = certified_bracket(0.5, 1, 0.125);
    CHECK(lo == doctest::Approx(0));
    CHECK(hi == doctest::Approx(1.0));
    std::tie(lo, hi) = certified_bracket(0.1, 2, 0.01);
    CHECK(lo == doctest::Approx(0.04));
    CHECK(hi == doctest::Approx(0.16));
    std::tie(lo, hi) = certified_bracket(0.1, 2, 1e-12);
    CHECK(lo == doctest::Approx(0.1));
    CHECK(hi == doctest::Approx(0.1));
    const SystemSpec odo = make_odometer(4);
    std::tie(lo, hi) = soundness_margin(build_cover(odo, 16), odo, 0.2);
    CHECK(lo == 0.2);
    CHECK(hi == 0.2);
}

TEST_CASE("outer graphs contain every sampled eps-jump; inner edges are realized from every sampled point") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const SystemSpec& f : {make_doubling(), make_rotation(parse_real("golden")), make_power(make_doubling(), 2)}) {
        for (double eps : {0.03, 0.1}) {
            const Cover c = build_cover(f, 128);
            const ChainGraph outer = build_chain_graph(c, f, eps, GraphMode::Outer);
            const ChainGraph inner = build_chain_graph(c, f, eps, GraphMode::Inner);
            std::size_t missing = 0, unrealized = 0;
            for (int s = 0; s < 20000; ++s) {
                const std::size_t j = rng() % c.size();
                const double x = wrap_unit(c.coords[0][j] + u(rng) * c.rho);
                const double fx = evaluate(f, Point{{x}, {}}).x[0];
                const double y = wrap_unit(fx + u(rng) * eps * (1 - 1e-9));
                const std::size_t i = cell_of(c, y);
                if (!outer.has_edge(j, i)) ++missing;
                for (auto t : inner.successors(j))
                    if (arc_distance(fx, c.coords[0][t]) >= eps + c.rho) ++unrealized;
            }
            CHECK(missing == 0);
            CHECK(unrealized == 0);
        }
    }
}

TEST_CASE("edges grow with eps and inner is contained in outer") {
    std::mt19937_64 rng(4);
    const std::vector<SystemSpec> systems{make_doubling(), make_rotation(parse_real("pi-3")), make_square_map(),
                                          make_logistic_map(3.9), make_two_circle(0.2), make_odometer(5),
                                          make_finite_shift({{1, 1}, {1, 0}}, 7),
                                          make_product(make_doubling(), make_rotation(parse_real("1/3")))};
    std::uniform_real_distribution<double> ue(0.005, 0.4);
    for (int trial = 0; trial < 40; ++trial) {
        const SystemSpec& f = systems[rng() % systems.size()];
        const auto natural = natural_cell_count(f);
        std::size_t n = natural ? *natural : (f.kind == SystemKind::Product ? std::size_t{1} << (2 * (3 + rng() % 3)) : 2 * (8 + rng() % 100));
        const Cover c = build_cover(f, n);
        double e1 = ue(rng), e2 = ue(rng);
        if (e1 > e2) std::swap(e1, e2);
        CAPTURE(f.describe());
        CAPTURE(n);
        CAPTURE(e1);
        CAPTURE(e2);
        for (GraphMode m : {GraphMode::Outer, GraphMode::Inner})
            CHECK(subset(build_chain_graph(c, f, e1, m), build_chain_graph(c, f, e2, m)));
        CHECK(subset(build_chain_graph(c, f, e1, GraphMode::Inner), build_chain_graph(c, f, e1, GraphMode::Outer)));
        const ChainGraph outer = build_chain_graph(c, f, e1, GraphMode::Outer);
        for (std::size_t v = 0; v < outer.n; ++v) CHECK(!outer.successors(v).empty());
    }
}

TEST_CASE("reachability certified by a fine inner graph survives in every outer graph") {
    // An inner path at eps' from cell(a) to cell(b) on the fine cover yields a
    // true chain from a to b with jumps below eps' + 2 rho; every outer graph at
    // eps >= that records each of its jumps.
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t certified = 0;
    for (const SystemSpec& f : {make_square_map(), make_doubling(), make_logistic_map(3.5), make_tent_map()}) {
        const Cover fine = build_cover(f, 1024);
        for (int trial = 0; trial < 12; ++trial) {
            const double a = u(rng), b = u(rng), eps = 0.01 + 0.05 * u(rng);
            auto cell = [&](const Cover& c, double x) {
                std::vector<double> row(c.size());
                distance_row(f, c, Point{{x}, {}}, row.data());
                return static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
            };
            const double eps_inner = eps - 2 * fine.rho * 1.0001;
            if (!reaches(build_chain_graph(fine, f, eps_inner, GraphMode::Inner), cell(fine, a), cell(fine, b))) continue;
            ++certified;
            for (std::size_t n = 16; n <= 1024; n *= 2) {
                const Cover c = build_cover(f, n);
                CAPTURE(f.describe());
                CAPTURE(n);
                CHECK(reaches(build_chain_graph(c, f, eps, GraphMode::Outer), cell(c, a), cell(c, b)));
            }
        }
    }
    CHECK(certified > 10);
}

TEST_CASE("inner rotation graph is a permutation when alpha is on the grid") {
    const SystemSpec f = make_rotation(parse_real("37/256"));
    const Cover c = build_cover(f, 256);
    const ChainGraph g = build_chain_graph(c, f, 0.5 / 256, GraphMode::Inner);
    for (std::size_t v = 0; v < g.n; ++v) CHECK(g.successors(v).size() == 1);
    // Off the grid the rigid rotation gives the same degree everywhere.
    const SystemSpec h = make_rotation(parse_real("golden"));
    const ChainGraph gh = build_chain_graph(c, h, 1.0 / 256, GraphMode::Inner);
    std::set<std::size_t> degrees;
    for (std::size_t v = 0; v < gh.n; ++v) degrees.insert(gh.successors(v).size());
    CHECK(degrees.size() <= 2);
    CHECK(*degrees.rbegin() <= 2);
}

TEST_CASE("graph and cover files round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "chainscope_io_test";
    std::filesystem::create_directories(dir);
    for (const SystemSpec& f : {make_doubling(), make_odometer(5),
                                make_product(make_rotation(parse_real("1/3")), make_two_circle(0.25))}) {
        const auto natural = natural_cell_count(f);
        const Cover c = build_cover(f, natural ? *natural : 64);
        for (GraphMode m : {GraphMode::Outer, GraphMode::Inner}) {
            const ChainGraph g = build_chain_graph(c, f, 0.07, m);
            for (const char* name : {"g.adj", "g.bin"}) {
                const auto path = (dir / name).string();
                save_graph(path, g);
                const ChainGraph h = load_graph(path);
                CHECK(h.to_lists() == g.to_lists());
                CHECK(h.eps == g.eps);
                CHECK(h.rho == g.rho);
                CHECK(h.mode == g.mode);
                CHECK(h.eps_lo == g.eps_lo);
                CHECK(h.eps_hi == g.eps_hi);
                CHECK(h.exact == g.exact);
                CHECK(h.system_description == g.system_description);
                CHECK(h.runs == g.runs);
            }
        }
        const auto cov = (dir / "c.cov").string();
        save_cover(cov, c, f);
        const auto [sys, back] = load_cover(cov);
        CHECK(sys.describe() == f.describe());
        CHECK(back.size() == c.size());
        CHECK(back.coords == c.coords);
        CHECK(back.symbols == c.symbols);
        CHECK(back.rho == c.rho);
    }
    std::istringstream junk("chainscope-adj 1\nN 2 eps\n");
    CHECK_THROWS(read_graph_text(junk));
    std::filesystem::remove_all(dir);
}

TEST_CASE("graph operations") {
    const ChainGraph c4 = ChainGraph::from_lists({{1}, {2}, {3}, {0}});
    CHECK(power_graph(c4, 2).to_lists() == std::vector<std::vector<std::uint32_t>>{{2}, {3}, {0}, {1}});
    CHECK(reverse_graph(c4).to_lists() == std::vector<std::vector<std::uint32_t>>{{3}, {0}, {1}, {2}});
    CHECK(induced_subgraph(c4, {0, 1}).edge_count() == 1);
    const ChainGraph t = tensor_product(c4, ChainGraph::from_lists({{1}, {0}}));
    CHECK(t.n == 8);
    CHECK(t.has_edge(0 * 2 + 0, 1 * 2 + 1));
    CHECK(ChainGraph::from_lists({{1, 1, 0}, {}}).successors(0).size() == 2);
}
