#include "chainscope/chain_graph.hpp"

#include <algorithm>

#include "chainscope/error.hpp"
#include "chainscope/kernels.hpp"
#include "chainscope/parallel.hpp"

namespace chainscope {
namespace {

void rebuild_runs(ChainGraph& g) {
    g.run_offsets.assign(1, 0);
    g.runs.clear();
    for (std::size_t v = 0; v < g.n; ++v) {
        const auto succ = g.successors(v);
        std::size_t i = 0;
        while (i < succ.size()) {
            std::size_t j = i + 1;
            while (j < succ.size() && succ[j] == succ[j - 1] + 1) ++j;
            g.runs.emplace_back(succ[i], succ[j - 1] + 1);
            i = j;
        }
        g.run_offsets.push_back(static_cast<std::uint32_t>(g.runs.size()));
    }
}

ChainGraph assemble(std::size_t n, std::vector<std::vector<std::uint32_t>>&& rows) {
    ChainGraph g;
    g.n = n;
    g.offsets.assign(1, 0);
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    if (total > UINT32_MAX) invalid("graph has too many edges for 32-bit offsets");
    g.targets.reserve(total);
    for (auto& r : rows) {
        g.targets.insert(g.targets.end(), r.begin(), r.end());
        g.offsets.push_back(static_cast<std::uint32_t>(g.targets.size()));
        std::vector<std::uint32_t>().swap(r);
    }
    rebuild_runs(g);
    return g;
}

void copy_metadata(const ChainGraph& from, ChainGraph& to) {
    to.mode = from.mode;
    to.eps = from.eps;
    to.rho = from.rho;
    to.lipschitz_c = from.lipschitz_c;
    to.eps_lo = from.eps_lo;
    to.eps_hi = from.eps_hi;
    to.exact = from.exact;
    to.system_description = from.system_description;
}

}  // namespace

std::string to_string(GraphMode mode) { return mode == GraphMode::Outer ? "outer" : "inner"; }

GraphMode parse_mode(const std::string& text) {
    if (text == "outer") return GraphMode::Outer;
    if (text == "inner") return GraphMode::Inner;
    invalid("unknown graph mode '" + text + "'", "use outer or inner");
}

bool ChainGraph::has_edge(std::size_t u, std::size_t v) const {
    const auto s = successors(u);
    return std::binary_search(s.begin(), s.end(), static_cast<std::uint32_t>(v));
}

ChainGraph ChainGraph::from_lists(const std::vector<std::vector<std::uint32_t>>& lists) {
    std::vector<std::vector<std::uint32_t>> rows = lists;
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        for (auto t : r)
            if (t >= lists.size()) invalid("successor index out of range");
    }
    ChainGraph g = assemble(lists.size(), std::move(rows));
    g.exact = true;
    return g;
}

std::vector<std::vector<std::uint32_t>> ChainGraph::to_lists() const {
    std::vector<std::vector<std::uint32_t>> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto s = successors(v);
        out[v].assign(s.begin(), s.end());
    }
    return out;
}

ChainGraph build_chain_graph(const Cover& cover, const SystemSpec& system, double eps, GraphMode mode,
                             std::optional<EdgeInflation> inflation) {
    if (!(eps > 0)) invalid("eps must be positive, got " + std::to_string(eps));
    const std::size_t n = cover.size();
    if (n > UINT32_MAX) invalid("cover too large");
    const double c = inflation ? inflation->lipschitz_c : system.lipschitz_c;
    const double rho = inflation ? inflation->rho : cover.rho;

    bool strict = true;
    double threshold = eps;
    if (!cover.exact) {
        if (mode == GraphMode::Outer) {
            strict = false;
            threshold = eps + (1 + c) * rho;
        } else {
            threshold = eps - (c - 1) * rho;
        }
    }

    std::vector<std::vector<std::uint32_t>> rows(n);
    const std::size_t words = (n + 63) / 64;
    const auto& k = kernels::active();
    // Rows are independent; each worker writes only its own slot.
    parallel_for(n, [&](std::size_t j) {
        thread_local std::vector<double> row;
        thread_local std::vector<std::uint64_t> mask;
        row.resize(n);
        mask.resize(words);
        const Point image_point = evaluate(system, cover.center(j));
        distance_row(system, cover, image_point, row.data());
        if (strict) k.less_mask(row.data(), n, threshold, mask.data());
        else k.less_equal_mask(row.data(), n, threshold, mask.data());
        auto& out = rows[j];
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = mask[w];
            while (bits) {
                out.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits))));
                bits &= bits - 1;
            }
        }
    });

    ChainGraph g = assemble(n, std::move(rows));
    g.mode = mode;
    g.eps = eps;
    g.rho = cover.rho;
    g.lipschitz_c = system.lipschitz_c;
    g.exact = cover.exact;
    std::tie(g.eps_lo, g.eps_hi) =
        cover.exact ? std::pair{eps, eps} : certified_bracket(eps, std::max(c, system.lipschitz_c), std::max(rho, cover.rho));
    g.system_description = system.describe();
    return g;
}

void image(const ChainGraph& g, const Bitset& s, Bitset& out) {
    out.clear();
    s.for_each([&](std::size_t v) {
        for (std::uint32_t r = g.run_offsets[v]; r < g.run_offsets[v + 1]; ++r)
            out.set_range(g.runs[r].first, g.runs[r].second);
    });
}

ChainGraph power_graph(const ChainGraph& g, int k) {
    if (k < 1) invalid("power_graph needs k >= 1");
    std::vector<std::vector<std::uint32_t>> rows(g.n);
    parallel_for(g.n, [&](std::size_t v) {
        Bitset cur(g.n), next(g.n);
        cur.set(v);
        for (int i = 0; i < k; ++i) {
            image(g, cur, next);
            std::swap(cur, next);
        }
        cur.for_each([&](std::size_t u) { rows[v].push_back(static_cast<std::uint32_t>(u)); });
    });
    ChainGraph p = assemble(g.n, std::move(rows));
    copy_metadata(g, p);
    return p;
}

ChainGraph induced_subgraph(const ChainGraph& g, const std::vector<std::size_t>& vertices) {
    std::vector<std::int64_t> index(g.n, -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = static_cast<std::int64_t>(i);
    std::vector<std::vector<std::uint32_t>> rows(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (auto t : g.successors(vertices[i]))
            if (index[t] >= 0) rows[i].push_back(static_cast<std::uint32_t>(index[t]));
        std::sort(rows[i].begin(), rows[i].end());
    }
    ChainGraph s = assemble(vertices.size(), std::move(rows));
    copy_metadata(g, s);
    return s;
}

ChainGraph tensor_product(const ChainGraph& g, const ChainGraph& h) {
    const std::size_t n = g.n * h.n;
    if (n > UINT32_MAX) invalid("tensor product too large");
    std::vector<std::vector<std::uint32_t>> rows(n);
    for (std::size_t u = 0; u < g.n; ++u)
        for (std::size_t v = 0; v < h.n; ++v) {
            auto& r = rows[u * h.n + v];
            for (auto u2 : g.successors(u))
                for (auto v2 : h.successors(v)) r.push_back(static_cast<std::uint32_t>(u2 * h.n + v2));
        }
    ChainGraph p = assemble(n, std::move(rows));
    copy_metadata(g, p);
    p.eps_lo = std::max(g.eps_lo, h.eps_lo);
    p.eps_hi = std::max(g.eps_hi, h.eps_hi);
    return p;
}

ChainGraph reverse_graph(const ChainGraph& g) {
    std::vector<std::vector<std::uint32_t>> rows(g.n);
    for (std::size_t u = 0; u < g.n; ++u)
        for (auto v : g.successors(u)) rows[v].push_back(static_cast<std::uint32_t>(u));
    ChainGraph r = assemble(g.n, std::move(rows));
    copy_metadata(g, r);
    return r;
}

}  // namespace chainscope
