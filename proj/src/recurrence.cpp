#include "chainscope/recurrence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "chainscope/error.hpp"
#include "chainscope/parallel.hpp"
#include "chainscope/structure.hpp"

namespace chainscope {

std::optional<std::uint32_t> recurrence_time_at(const ChainGraph& g, std::size_t v) {
    if (v >= g.n) invalid("vertex out of range");
    // BFS from v over successor runs, a word of the visited set at a time; the
    // first run containing v closes the shortest cycle.
    thread_local std::vector<std::uint64_t> visited;
    thread_local std::vector<std::uint32_t> queue, dist;
    const std::size_t words = (g.n + 63) / 64;
    visited.assign(words, 0);
    queue.clear();
    dist.clear();
    queue.push_back(static_cast<std::uint32_t>(v));
    dist.push_back(0);
    visited[v / 64] |= std::uint64_t{1} << (v % 64);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        const auto d = dist[head] + 1;
        for (std::uint32_t r = g.run_offsets[u]; r < g.run_offsets[u + 1]; ++r) {
            const auto [lo, hi] = g.runs[r];
            if (v >= lo && v < hi) return d;
            for (std::size_t w = lo / 64; w <= (hi - 1) / 64; ++w) {
                std::uint64_t mask = ~std::uint64_t{0};
                if (w == lo / 64) mask &= ~std::uint64_t{0} << (lo % 64);
                if (w == (hi - 1) / 64 && hi % 64) mask &= ~(~std::uint64_t{0} << (hi % 64));
                mask &= ~visited[w];
                visited[w] |= mask;
                while (mask) {
                    queue.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(mask))));
                    dist.push_back(d);
                    mask &= mask - 1;
                }
            }
        }
    }
    return std::nullopt;
}

RecurrenceReport recurrence_time(const ChainGraph& g, std::optional<std::size_t> sample, std::uint64_t seed) {
    RecurrenceReport rep;
    rep.per_vertex.assign(g.n, std::nullopt);
    std::vector<std::size_t> vertices(g.n);
    for (std::size_t i = 0; i < g.n; ++i) vertices[i] = i;
    if (sample && *sample < g.n) {
        std::mt19937_64 rng(seed);
        std::shuffle(vertices.begin(), vertices.end(), rng);
        vertices.resize(*sample);
        std::sort(vertices.begin(), vertices.end());
        rep.sampled = true;
        rep.seed = seed;
    }
    parallel_for(vertices.size(), [&](std::size_t i) { rep.per_vertex[vertices[i]] = recurrence_time_at(g, vertices[i]); });
    rep.evaluated_count = vertices.size();
    rep.all_recurrent = true;
    for (std::size_t v : vertices) {
        const auto& r = rep.per_vertex[v];
        if (!r) {
            rep.all_recurrent = false;
            continue;
        }
        ++rep.recurrent_count;
        if (*r > rep.max_r) {
            rep.max_r = *r;
            rep.argmax = v;
        }
    }
    return rep;
}

std::uint64_t wielandt_bound(std::size_t n) {
    const std::uint64_t m = n == 0 ? 0 : n - 1;
    return m * m + 1;
}

std::optional<std::uint64_t> mixing_time_from(const ChainGraph& g, const Bitset& start) {
    if (start.size() != g.n) invalid("start set size does not match the graph");
    if (start.none()) invalid("mixing_time_from needs a nonempty start set");
    // Once full, the set stays full iff every vertex has an in-edge; without
    // that it can never be full at N >= 1.
    const std::uint64_t cap = wielandt_bound(g.n) + 1;
    Bitset cur = start, next(g.n);
    // Brent-style cycle check: compare against a snapshot taken at powers of two.
    Bitset snapshot = start;
    std::uint64_t snapshot_at = 0, power = 1;
    for (std::uint64_t step = 1; step <= cap; ++step) {
        image(g, cur, next);
        std::swap(cur, next);
        if (cur.all()) return step;
        if (cur.none()) return std::nullopt;
        if (cur == snapshot) return std::nullopt;  // periodic without ever filling
        if (step - snapshot_at == power) {
            snapshot = cur;
            snapshot_at = step;
            power *= 2;
        }
    }
    return std::nullopt;
}

std::optional<std::uint64_t> primitivity_exponent(const ChainGraph& g) {
    if (!is_chain_transitive(g)) return std::nullopt;
    if (period(g) != 1) return std::nullopt;
    // With every vertex having an in-edge, "all pairs at length p" is "every
    // single-vertex start is full at p", and fullness persists.
    std::vector<std::uint64_t> fill(g.n, 0);
    parallel_for(g.n, [&](std::size_t u) {
        Bitset s(g.n);
        s.set(u);
        const auto t = mixing_time_from(g, s);
        fill[u] = t ? *t : 0;
    });
    if (std::find(fill.begin(), fill.end(), 0u) != fill.end()) return std::nullopt;
    return *std::max_element(fill.begin(), fill.end());
}

double lipschitz_lower_bound(double c, double D, double eps, double delta) {
    if (c < 1)
        invalid("Lipschitz constant " + std::to_string(c) +
                    " < 1: a contraction has an attracting fixed point (Banach fixed-point theorem), so the map "
                    "cannot be chain mixing",
                "use a Lipschitz constant >= 1");
    if (!(D > 0) || !(eps > 0) || delta < 0) invalid("lipschitz_lower_bound needs D > 0, eps > 0, delta >= 0");
    if (2 * delta > D) invalid("lipschitz_lower_bound needs 2*delta <= D");
    if (c == 1) return (D - 2 * delta) / (2 * eps);
    return std::log((D * (c - 1) + 2 * eps) / (2 * delta * (c - 1) + 2 * eps)) / std::log(c);
}

Bitset start_set(const SystemSpec& system, const Cover& cover, std::size_t cell, double delta, GraphMode mode,
                 std::optional<double> rho_override) {
    const double rho = rho_override ? *rho_override : cover.rho;
    std::vector<double> row(cover.size());
    distance_row(system, cover, cover.center(cell), row.data());
    Bitset s(cover.size());
    for (std::size_t i = 0; i < cover.size(); ++i) {
        const bool in = cover.exact ? row[i] < delta
                        : mode == GraphMode::Outer ? row[i] <= delta + rho
                                                   : row[i] + rho <= delta;
        if (in) s.set(i);
    }
    return s;
}

MixingReport mixing_time(const ChainGraph& g, const Cover& cover, const SystemSpec& system, double delta,
                         const MixingOptions& options) {
    if (g.n != cover.size()) invalid("graph and cover sizes differ");
    if (!(delta > g.eps))
        invalid("mixing_time needs delta > eps (got delta=" + std::to_string(delta) + ", eps=" + std::to_string(g.eps) + ")");
    MixingReport rep;
    rep.delta = delta;
    rep.per_cell.assign(g.n, std::nullopt);
    if (!cover.exact && g.mode == GraphMode::Inner && cover.rho > delta)
        throw Error(ErrorKind::InfeasibleResolution,
                    "no cell fits inside a delta-ball: rho=" + std::to_string(cover.rho) + " > delta=" + std::to_string(delta),
                    "use more cells or a larger delta");
    parallel_for(g.n, [&](std::size_t x) {
        const Bitset s = start_set(system, cover, x, delta, g.mode);
        if (s.none()) return;
        rep.per_cell[x] = mixing_time_from(g, s);
    });
    std::uint64_t m = 0;
    for (const auto& v : rep.per_cell) {
        if (!v) {
            rep.diverged = true;
            break;
        }
        m = std::max(m, *v);
    }
    if (!rep.diverged) rep.m_hat = m;
    if (is_chain_transitive(g)) rep.period = period(g);
    rep.wielandt = wielandt_bound(g.n);
    if (options.compute_primitivity) {
        rep.primitivity_exponent = primitivity_exponent(g);
        rep.wielandt_ok = !rep.primitivity_exponent || *rep.primitivity_exponent <= rep.wielandt;
    }
    const double delta_eff = cover.exact ? delta : delta + 2 * cover.rho;
    if (system.lipschitz_c >= 1 && 2 * delta_eff <= system.diameter_D) {
        rep.lipschitz_bound = lipschitz_lower_bound(system.lipschitz_c, system.diameter_D, g.eps_hi, delta_eff);
        if (g.mode == GraphMode::Outer && rep.m_hat)
            rep.lipschitz_ok = static_cast<double>(*rep.m_hat) >= *rep.lipschitz_bound;
    }
    return rep;
}

std::pair<double, double> boxdim_upper_bounds(double d_prime, double eps, double C) {
    if (!(d_prime > 0) || !(C > 0) || !(eps > 0)) invalid("boxdim_upper_bounds needs d' > 0, C > 0, eps > 0");
    return {C / std::pow(eps, d_prime), C / std::pow(eps, 2 * d_prime)};
}

BoxdimCheck fit_and_check_boxdim(const std::vector<double>& eps, const std::vector<double>& values, double d_prime,
                                 int exponent_scale) {
    if (eps.empty() || eps.size() != values.size()) invalid("fit_and_check_boxdim needs matching nonempty ladders");
    // Coarsest rung = largest eps.
    const std::size_t coarse = static_cast<std::size_t>(std::max_element(eps.begin(), eps.end()) - eps.begin());
    const double exponent = d_prime * exponent_scale;
    BoxdimCheck out;
    out.C = std::max(values[coarse], 1e-300) * std::pow(eps[coarse], exponent);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double b = out.C / std::pow(eps[i], exponent);
        out.bound.push_back(b);
        out.ok.push_back(values[i] <= b * (1 + 1e-12));
        out.all_ok = out.all_ok && out.ok.back();
    }
    return out;
}

}  // namespace chainscope
