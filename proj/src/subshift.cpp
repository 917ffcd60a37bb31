#include "chainscope/subshift.hpp"

#include <cmath>

#include "chainscope/error.hpp"
#include "chainscope/recurrence.hpp"
#include "chainscope/structure.hpp"

namespace chainscope {

void validate_transition_matrix(const TransitionMatrix& a) {
    const std::size_t m = a.size();
    if (m == 0) invalid("transition matrix is empty");
    std::vector<std::uint8_t> col_any(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i].size() != m) invalid("transition matrix must be square");
        bool row_any = false;
        for (std::size_t j = 0; j < m; ++j) {
            if (a[i][j] > 1) invalid("transition matrix entries must be 0 or 1");
            if (a[i][j]) {
                row_any = true;
                col_any[j] = 1;
            }
        }
        if (!row_any) invalid("transition matrix row " + std::to_string(i) + " is zero (symbol with no successor)");
    }
    for (std::size_t j = 0; j < m; ++j)
        if (!col_any[j]) invalid("transition matrix column " + std::to_string(j) + " is zero (symbol with no predecessor)");
}

ChainGraph symbol_graph(const TransitionMatrix& a) {
    validate_transition_matrix(a);
    std::vector<std::vector<std::uint32_t>> lists(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[i][j]) lists[i].push_back(static_cast<std::uint32_t>(j));
    return ChainGraph::from_lists(lists);
}

SubshiftStructure subshift_structure(const TransitionMatrix& a) {
    const ChainGraph g = symbol_graph(a);
    SubshiftStructure s;
    s.irreducible = is_chain_transitive(g);
    if (s.irreducible) {
        s.period = period(g);
        if (*s.period == 1) s.primitivity_exponent = primitivity_exponent(g);
    }
    return s;
}

std::optional<std::size_t> shortest_return_word(const TransitionMatrix& a, std::size_t from, std::size_t to) {
    const ChainGraph g = symbol_graph(a);
    if (from >= g.n || to >= g.n) invalid("symbol out of range");
    std::vector<std::int64_t> dist(g.n, -1);
    std::vector<std::uint32_t> queue;
    // distances measured in steps, starting from the successors of `from`
    for (auto v : g.successors(from))
        if (dist[v] < 0) {
            dist[v] = 1;
            queue.push_back(v);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        for (auto v : g.successors(u))
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    if (dist[to] < 0) return std::nullopt;
    return static_cast<std::size_t>(dist[to]);
}

std::size_t subshift_r_eps_profile(const TransitionMatrix& a, double eps, const std::vector<std::uint8_t>& word) {
    if (!(eps > 0)) invalid("eps must be positive");
    validate_transition_matrix(a);
    std::size_t k = 0;
    while (!(std::ldexp(1.0, -static_cast<int>(k) - 1) < eps)) ++k;
    if (word.size() < k + 1)
        invalid("word needs at least " + std::to_string(k + 1) + " symbols at eps=" + std::to_string(eps));
    for (std::size_t i = 0; i + 1 <= k; ++i)
        if (word[i] >= a.size() || !a[word[i]][word[i + 1]]) invalid("word is not allowed by the transition matrix");
    const auto m = shortest_return_word(a, word[k], word[0]);
    if (!m) invalid("no return word from the last symbol to the first (matrix not irreducible)");
    return k + *m;
}

}  // namespace chainscope
