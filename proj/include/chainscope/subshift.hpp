#pragma once

// Subshifts of finite type given by a 0/1 transition matrix A (A[i][j] = 1
// when symbol j may follow symbol i).

#include <cstdint>
#include <optional>
#include <vector>

#include "chainscope/chain_graph.hpp"

namespace chainscope {

using TransitionMatrix = std::vector<std::vector<std::uint8_t>>;

struct SubshiftStructure {
    bool irreducible = false;
    std::optional<std::size_t> period;                 // when irreducible
    std::optional<std::uint64_t> primitivity_exponent; // when irreducible and aperiodic
};

// Rejects non-square matrices, entries other than 0/1 and zero rows/columns.
void validate_transition_matrix(const TransitionMatrix& a);
ChainGraph symbol_graph(const TransitionMatrix& a);
SubshiftStructure subshift_structure(const TransitionMatrix& a);

// Shortest walk of length >= 1 from `from` to `to` in the symbol graph.
std::optional<std::size_t> shortest_return_word(const TransitionMatrix& a, std::size_t from, std::size_t to);

// Generic upper value k + m of r_eps at a point starting with the allowed word
// a_0 ... a_k: k is the smallest integer with 2^-(k+1) < eps and m the
// shortest walk from a_k back to a_0. The word must have at least k+1 symbols.
std::size_t subshift_r_eps_profile(const TransitionMatrix& a, double eps, const std::vector<std::uint8_t>& word);

}  // namespace chainscope
