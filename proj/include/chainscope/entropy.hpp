#pragma once

// Entropy lower bound h(f) >= d * limsup_{delta->0} log(1/delta) / lim_{eps->0} m_eps(delta),
// with the limits replaced by finite ladders (smallest eps per delta, max
// over delta), plus covering numbers, a box-dimension fit and the growth
// rate of walk counts.

#include <optional>
#include <vector>

#include "chainscope/chain_graph.hpp"
#include "chainscope/cover.hpp"
#include "chainscope/system.hpp"

namespace chainscope {

struct NspanCount {
    double alpha = 0;
    std::size_t count = 0;
    bool exact = false;   // false: greedy or product count, an upper bound on the minimum
};

// Minimum number of closed alpha-balls covering the space.
std::vector<NspanCount> nspan_counts(const SystemSpec& system, const std::vector<double>& alphas);

struct BoxDimFit {
    double d = 0;           // slope of log N against log(1/alpha)
    double intercept = 0;
    double residual = 0;    // root mean square
};

BoxDimFit box_dimension_estimate(const std::vector<NspanCount>& counts);

struct EntropyGridPoint {
    double delta = 0;
    double eps = 0;
    std::optional<std::uint64_t> m;   // empty: did not mix
    double h_bound = 0;               // d log(1/delta) / m, 0 when m is empty
};

struct EntropyReport {
    std::vector<EntropyGridPoint> grid;
    double d = 0;
    bool d_exact = true;
    // Per delta: the value at the smallest eps with a defined m.
    std::vector<EntropyGridPoint> per_delta;
    double bound = 0;              // max over per_delta (nats)
    double bound_finest_delta = 0; // per_delta value at the smallest delta
    double bound_bits() const;
};

// h_bound of each grid point is recomputed from d.
EntropyReport entropy_lower_bound(std::vector<EntropyGridPoint> grid, double d);

// Builds the grid from transition graphs: for each eps a policy cover (or a
// fixed cell count), then m for every delta > eps.
EntropyReport entropy_from_graphs(const SystemSpec& system, const std::vector<double>& deltas,
                                  const std::vector<double>& eps_ladder, GraphMode mode,
                                  std::optional<std::size_t> cells, const ResolutionPolicy& policy, double d);

// log of the growth factor of walk counts.
double path_growth_rate(const ChainGraph& g);

}  // namespace chainscope
