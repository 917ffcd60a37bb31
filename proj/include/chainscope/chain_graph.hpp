#pragma once

// Directed eps-transition graph on the cells of a cover.
//
// Jumps are strict: y is an eps-jump from x when d(f(x), y) < eps.
//   outer: j -> i iff d(f(c_j), c_i) <= eps + (1 + c) rho
//          (every eps-jump from cell j into cell i is recorded)
//   inner: j -> i iff d(f(c_j), c_i) + (c - 1) rho < eps
//          (every point of cell j has an eps-jump into cell i)
//   exact (symbolic truncations, one point per cell): j -> i iff d(f(c_j), c_i) < eps

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainscope/bitset.hpp"
#include "chainscope/cover.hpp"

namespace chainscope {

enum class GraphMode { Outer, Inner };

std::string to_string(GraphMode mode);
GraphMode parse_mode(const std::string& text);

struct ChainGraph {
    std::size_t n = 0;
    std::vector<std::uint32_t> offsets{0};  // CSR, size n + 1
    std::vector<std::uint32_t> targets;     // sorted within each vertex

    // Successors again as maximal runs [lo, hi) of consecutive indices; grid
    // covers produce one or two runs per vertex, which makes images cheap.
    std::vector<std::uint32_t> run_offsets{0};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;

    GraphMode mode = GraphMode::Outer;
    double eps = 0;
    double rho = 0;
    double lipschitz_c = 1;
    double eps_lo = 0;
    double eps_hi = 0;
    bool exact = false;
    std::string system_description;

    std::size_t size() const { return n; }
    std::size_t edge_count() const { return targets.size(); }
    std::span<const std::uint32_t> successors(std::size_t v) const {
        return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
    }
    bool has_edge(std::size_t u, std::size_t v) const;

    // Build from plain successor lists (duplicates removed, lists sorted).
    static ChainGraph from_lists(const std::vector<std::vector<std::uint32_t>>& lists);
    std::vector<std::vector<std::uint32_t>> to_lists() const;
};

// Overrides the (c, rho) used in the outer/inner thresholds. Used to build
// factor graphs with a product's constants so the product graph is exactly
// their tensor product.
struct EdgeInflation {
    double lipschitz_c;
    double rho;
};

ChainGraph build_chain_graph(const Cover& cover, const SystemSpec& system, double eps, GraphMode mode,
                             std::optional<EdgeInflation> inflation = std::nullopt);

// out = successors(S).
void image(const ChainGraph& g, const Bitset& s, Bitset& out);

// Edges u -> v iff there is a walk of length exactly k from u to v.
ChainGraph power_graph(const ChainGraph& g, int k);
// Subgraph on `vertices` (renumbered in the given order).
ChainGraph induced_subgraph(const ChainGraph& g, const std::vector<std::size_t>& vertices);
// (u, v) -> (u', v') iff u -> u' and v -> v'; vertex index u * |h| + v.
ChainGraph tensor_product(const ChainGraph& g, const ChainGraph& h);
ChainGraph reverse_graph(const ChainGraph& g);

}  // namespace chainscope
