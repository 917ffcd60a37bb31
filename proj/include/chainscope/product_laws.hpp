#pragma once

// Checks of the product and power inequalities for r_eps and m_eps(delta):
//   r((x,y), f x g) >= max(r(x,f), r(y,g))
//   r((x,y), f x g) <= lcm(r(x,f), r(y,g))
//   r(x, f^k)       >= r(x,f) / k
//   m(delta, f x g)  = max(m(delta,f), m(delta,g))
//   m(delta, f^k)   >= m(delta,f) / k
// evaluated on transition graphs.

#include <optional>
#include <string>
#include <vector>

#include "chainscope/chain_graph.hpp"
#include "chainscope/system.hpp"

namespace chainscope {

struct LawCheck {
    std::string law;         // e.g. "r(fxg) >= max(r(f), r(g))"
    std::size_t evaluated = 0;
    std::size_t violations = 0;
    double worst_lhs = 0;    // at the first violation, else at the extreme case
    double worst_rhs = 0;
    bool holds() const { return violations == 0; }
};

struct ProductLawReport {
    std::string description;
    double eps = 0;
    double delta = 0;
    GraphMode mode = GraphMode::Outer;
    std::size_t product_r = 0;           // max r over product cells
    std::optional<std::uint64_t> product_m;
    std::vector<LawCheck> checks;
    // Power laws only: same-eps comparison without the iteration slack (for
    // information; not a pass criterion), and the first eps' <= eps on the
    // searched ladder with r(x, f^k) at eps <= r(x, f) at eps' for all x.
    std::optional<LawCheck> raw_power_recurrence;
    std::optional<double> upper_witness_eps;
    bool all_hold() const;
};

// Factor graphs are built with the product's (c, rho), so the product graph is
// exactly their tensor product and the laws can be checked cell by cell.
ProductLawReport check_product_laws(const SystemSpec& a, const SystemSpec& b, std::size_t cells_a,
                                    std::size_t cells_b, double eps, double delta, GraphMode mode = GraphMode::Outer);

// The f^k graph is compared with the f graph at eps + c^k rho (outer mode),
// which absorbs the drift of the k-step orbit between cell centers.
ProductLawReport check_power_laws(const SystemSpec& f, int k, std::size_t cells, double eps, double delta,
                                  GraphMode mode = GraphMode::Outer);

}  // namespace chainscope
