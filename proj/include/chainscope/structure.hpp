#pragma once

// Chain-recurrence skeleton of a transition graph: strongly connected
// components, the period k_eps (gcd of cycle lengths), cyclic classes, and the
// across-eps ladder that separates "k stabilizes" from "k keeps doubling".

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainscope/bitset.hpp"
#include "chainscope/chain_graph.hpp"
#include "chainscope/cover.hpp"

namespace chainscope {

struct SccDecomposition {
    std::vector<std::uint32_t> component;     // per vertex
    std::size_t count = 0;
    std::vector<std::uint8_t> nontrivial;     // per component: size > 1 or a self-loop
    std::vector<std::uint32_t> size;          // per component
    std::vector<std::uint32_t> topological;   // components, sources first
};

SccDecomposition scc(const ChainGraph& g);

// Vertices lying on some cycle.
Bitset chain_recurrent_vertices(const ChainGraph& g);
// One strongly connected component containing every vertex, with a cycle.
bool is_chain_transitive(const ChainGraph& g);

// gcd of all cycle lengths; requires a strongly connected graph with a cycle.
std::size_t period(const ChainGraph& g);

struct CyclicStructure {
    std::size_t k = 1;
    std::vector<std::uint32_t> label;   // class of each vertex, in [0, k)
    std::vector<std::uint32_t> next;    // next[i] = class reached from class i
};

// Classes are BFS levels from `root` mod k.
CyclicStructure cyclic_classes(const ChainGraph& g, std::size_t root = 0);

// Largest integer not of the form a*m + b*n with a, b >= 0 (gcd(m, n) = 1).
long long frobenius_threshold(long long m, long long n);

struct LadderRung {
    double eps = 0;
    std::size_t cells = 0;
    GraphMode mode = GraphMode::Outer;
    double eps_lo = 0;
    double eps_hi = 0;
    bool transitive = false;
    std::size_t k = 0;   // 0 when not transitive
    std::size_t nontrivial_components = 0;
};

enum class LadderVerdict { StabilizedPeriodic, AddingMachineEvidence, NotChainTransitive, Inconclusive };

struct StructureLadder {
    std::vector<LadderRung> rungs;
    LadderVerdict verdict = LadderVerdict::Inconclusive;
    std::size_t stable_k = 0;                 // StabilizedPeriodic
    std::vector<std::size_t> J;               // AddingMachineEvidence
    double failing_eps = 0;                   // NotChainTransitive
    // Rung index pairs (i, i+1) where k at the coarser rung i does not divide k
    // at rung i+1; these are discretization artifacts.
    std::vector<std::pair<std::size_t, std::size_t>> divisibility_violations;

    std::string verdict_text() const;
};

// Minimum number of consecutive strict increases of k needed to report
// adding-machine evidence.
inline constexpr std::size_t kAddingMachineMinIncreases = 4;

// Verdict from already computed rungs (ordered by decreasing eps).
StructureLadder classify_ladder(std::vector<LadderRung> rungs);

StructureLadder structure_ladder(const SystemSpec& system, const std::vector<double>& eps_ladder,
                                 const ResolutionPolicy& policy = {}, GraphMode mode = GraphMode::Outer);

}  // namespace chainscope
