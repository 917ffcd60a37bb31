#include "chainscope/product_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chainscope/cover.hpp"
#include "chainscope/error.hpp"
#include "chainscope/recurrence.hpp"

namespace chainscope {
namespace {

void record(LawCheck& c, bool ok, double lhs, double rhs) {
    ++c.evaluated;
    if (!ok) {
        if (c.violations == 0) {
            c.worst_lhs = lhs;
            c.worst_rhs = rhs;
        }
        ++c.violations;
    } else if (c.violations == 0 && c.evaluated == 1) {
        c.worst_lhs = lhs;
        c.worst_rhs = rhs;
    }
}

std::optional<std::uint64_t> max_over(const std::vector<std::optional<std::uint64_t>>& v) {
    std::uint64_t m = 0;
    for (const auto& x : v) {
        if (!x) return std::nullopt;
        m = std::max(m, *x);
    }
    return m;
}

std::vector<std::optional<std::uint64_t>> mixing_per_cell(const ChainGraph& g, const Cover& cover,
                                                          const SystemSpec& system, double delta, double rho) {
    std::vector<std::optional<std::uint64_t>> out(g.n);
    for (std::size_t x = 0; x < g.n; ++x) {
        const Bitset s = start_set(system, cover, x, delta, g.mode, rho);
        if (!s.none()) out[x] = mixing_time_from(g, s);
    }
    return out;
}

}  // namespace

bool ProductLawReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const LawCheck& c) { return c.holds(); });
}

ProductLawReport check_product_laws(const SystemSpec& a, const SystemSpec& b, std::size_t cells_a,
                                    std::size_t cells_b, double eps, double delta, GraphMode mode) {
    const SystemSpec prod = make_product(a, b);
    const Cover ca = build_cover(a, cells_a), cb = build_cover(b, cells_b);
    const Cover cp = product_cover(ca, cb, prod);
    const EdgeInflation infl{prod.lipschitz_c, cp.rho};
    const ChainGraph ga = build_chain_graph(ca, a, eps, mode, infl);
    const ChainGraph gb = build_chain_graph(cb, b, eps, mode, infl);
    const ChainGraph gp = build_chain_graph(cp, prod, eps, mode);

    ProductLawReport rep;
    rep.description = prod.describe();
    rep.eps = eps;
    rep.delta = delta;
    rep.mode = mode;

    const auto ra = recurrence_time(ga), rb = recurrence_time(gb), rp = recurrence_time(gp);
    rep.product_r = rp.max_r;
    LawCheck lower{"r(fxg) >= max(r(f), r(g))"}, upper{"r(fxg) <= lcm(r(f), r(g))"};
    for (std::size_t i = 0; i < ca.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j) {
            const auto& x = ra.per_vertex[i];
            const auto& y = rb.per_vertex[j];
            const auto& p = rp.per_vertex[i * cb.size() + j];
            if (!x || !y) {
                // the pair lies on no cycle of the product either
                record(lower, !p, p ? *p : 0, 0);
                continue;
            }
            const double lhs = p ? *p : INFINITY;
            const double mx = std::max(*x, *y);
            const double lcm = static_cast<double>(std::lcm(static_cast<std::uint64_t>(*x), static_cast<std::uint64_t>(*y)));
            record(lower, lhs >= mx, lhs, mx);
            record(upper, lhs <= lcm, lhs, lcm);
        }
    rep.checks.push_back(lower);
    rep.checks.push_back(upper);

    if (delta > eps) {
        const auto ma = mixing_per_cell(ga, ca, a, delta, cp.rho);
        const auto mb = mixing_per_cell(gb, cb, b, delta, cp.rho);
        const auto mp = mixing_per_cell(gp, cp, prod, delta, cp.rho);
        const auto Ma = max_over(ma), Mb = max_over(mb), Mp = max_over(mp);
        rep.product_m = Mp;
        LawCheck mix{"m(fxg) = max(m(f), m(g))"};
        if (Ma && Mb) record(mix, Mp && *Mp == std::max(*Ma, *Mb), Mp ? *Mp : INFINITY, std::max(*Ma, *Mb));
        else record(mix, !Mp, Mp ? *Mp : 0, INFINITY);  // a factor that never mixes forbids product mixing
        rep.checks.push_back(mix);
    }
    return rep;
}

ProductLawReport check_power_laws(const SystemSpec& f, int k, std::size_t cells, double eps, double delta,
                                  GraphMode mode) {
    if (k < 1) invalid("power exponent must be >= 1");
    const SystemSpec fk = make_power(f, k);
    const Cover cover = build_cover(f, cells);
    const Cover cover_k = build_cover(fk, cells);
    const ChainGraph gk = build_chain_graph(cover_k, fk, eps, mode);
    // Outer f^k edges are k-walks of the outer f graph at this slack. The
    // argument is for outer graphs; inner mode compares at equal eps and
    // carries no such guarantee.
    const double slack = cover.exact ? 0.0 : std::pow(f.lipschitz_c, k) * cover.rho;
    const ChainGraph g_slack = build_chain_graph(cover, f, eps + (mode == GraphMode::Outer ? slack : 0.0), mode);
    const ChainGraph g_same = build_chain_graph(cover, f, eps, mode);

    ProductLawReport rep;
    rep.description = fk.describe();
    rep.eps = eps;
    rep.delta = delta;
    rep.mode = mode;

    const auto rk = recurrence_time(gk), r1 = recurrence_time(g_slack), r_same = recurrence_time(g_same);
    rep.product_r = rk.max_r;
    LawCheck lower{"r(f^k) >= r(f) / k"};
    LawCheck raw{"r(f^k) >= r(f) / k at equal eps"};
    for (std::size_t x = 0; x < cells; ++x) {
        const auto& a = rk.per_vertex[x];
        const auto& b = r1.per_vertex[x];
        if (a && b) record(lower, *a * static_cast<double>(k) >= *b, *a, *b / static_cast<double>(k));
        else if (a && !b) record(lower, false, *a, INFINITY);
        if (a && r_same.per_vertex[x])
            record(raw, *a * static_cast<double>(k) >= *r_same.per_vertex[x], *a, *r_same.per_vertex[x] / static_cast<double>(k));
    }
    rep.checks.push_back(lower);
    rep.raw_power_recurrence = raw;

    if (delta > eps + (mode == GraphMode::Outer ? slack : 0.0)) {
        const auto mk = max_over(mixing_per_cell(gk, cover_k, fk, delta, cover.rho));
        const auto m1 = max_over(mixing_per_cell(g_slack, cover, f, delta, cover.rho));
        rep.product_m = mk;
        LawCheck mix{"m(f^k) >= m(f) / k"};
        if (mk && m1) record(mix, static_cast<double>(*mk) * k >= static_cast<double>(*m1), *mk, *m1 / static_cast<double>(k));
        else if (mk && !m1) record(mix, false, *mk, INFINITY);
        rep.checks.push_back(mix);
    }

    // Upper law: search eps' = eps, eps/2, ... for a witness.
    for (int i = 0; i <= 8; ++i) {
        const double eps_prime = eps * std::ldexp(1.0, -i);
        const ChainGraph g = build_chain_graph(cover, f, eps_prime, mode);
        const auto r = recurrence_time(g);
        bool ok = true;
        for (std::size_t x = 0; x < cells && ok; ++x) {
            const auto& a = rk.per_vertex[x];
            const auto& b = r.per_vertex[x];
            if (b && (!a || *a > *b)) ok = false;
            if (!b) ok = false;
        }
        if (ok) {
            rep.upper_witness_eps = eps_prime;
            break;
        }
    }
    return rep;
}

}  // namespace chainscope
