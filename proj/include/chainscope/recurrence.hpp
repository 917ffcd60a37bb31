#pragma once

// Recurrence times r_eps and mixing times m_eps(delta) on transition graphs,
// primitivity exponents, and the analytic bounds they are checked against.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chainscope/bitset.hpp"
#include "chainscope/chain_graph.hpp"
#include "chainscope/cover.hpp"

namespace chainscope {

// Length of the shortest cycle through v; empty if v lies on no cycle.
std::optional<std::uint32_t> recurrence_time_at(const ChainGraph& g, std::size_t v);

struct RecurrenceReport {
    std::vector<std::optional<std::uint32_t>> per_vertex;  // unsampled vertices stay empty when sampling
    std::size_t max_r = 0;            // over recurrent (evaluated) vertices; 0 if none
    std::size_t argmax = 0;
    std::size_t recurrent_count = 0;
    std::size_t evaluated_count = 0;
    bool all_recurrent = false;       // every evaluated vertex lies on a cycle
    bool sampled = false;             // max_r is then a lower bound on the true maximum
    std::uint64_t seed = 0;
};

RecurrenceReport recurrence_time(const ChainGraph& g, std::optional<std::size_t> sample = std::nullopt,
                                  std::uint64_t seed = 1);

// First N >= 1 with successors^N(start) = all vertices; empty when the
// iteration cycles without filling (or exceeds the Wielandt bound + 1).
std::optional<std::uint64_t> mixing_time_from(const ChainGraph& g, const Bitset& start);

// (N - 1)^2 + 1.
std::uint64_t wielandt_bound(std::size_t n);

// Smallest p such that every ordered pair is joined by a walk of length
// exactly p; empty unless the graph is strongly connected with period 1.
std::optional<std::uint64_t> primitivity_exponent(const ChainGraph& g);

// Lower bound on m_eps(delta) for a map with Lipschitz constant c on a space of
// diameter D: log_c((D(c-1) + 2eps) / (2delta(c-1) + 2eps)) for c > 1,
// (D - 2delta) / (2eps) for c = 1.
double lipschitz_lower_bound(double c, double D, double eps, double delta);

// Start sets for m_eps(delta): outer mode takes the cells meeting the
// delta-ball around the center of `cell`, inner mode the cells inside it.
Bitset start_set(const SystemSpec& system, const Cover& cover, std::size_t cell, double delta, GraphMode mode,
                 std::optional<double> rho_override = std::nullopt);

struct MixingReport {
    double delta = 0;
    std::vector<std::optional<std::uint64_t>> per_cell;
    std::optional<std::uint64_t> m_hat;          // empty if some start set diverged
    bool diverged = false;
    std::optional<std::uint64_t> primitivity_exponent;
    std::optional<std::size_t> period;           // when strongly connected
    std::uint64_t wielandt = 0;
    bool wielandt_ok = true;
    // Bound evaluated at (eps_hi, delta + 2 rho); empty when its hypotheses fail.
    std::optional<double> lipschitz_bound;
    bool lipschitz_ok = true;
};

struct MixingOptions {
    bool compute_primitivity = true;
};

MixingReport mixing_time(const ChainGraph& g, const Cover& cover, const SystemSpec& system, double delta,
                         const MixingOptions& options = {});

// (C / eps^d', C / eps^(2 d')).
std::pair<double, double> boxdim_upper_bounds(double d_prime, double eps, double C);

struct BoxdimCheck {
    double C = 0;                  // fitted on the coarsest rung
    std::vector<double> bound;     // per rung
    std::vector<bool> ok;
    bool all_ok = true;
};

// exponent_scale is 1 for r (C/eps^d') and 2 for m (C/eps^(2d')).
BoxdimCheck fit_and_check_boxdim(const std::vector<double>& eps, const std::vector<double>& values, double d_prime,
                                 int exponent_scale);

}  // namespace chainscope
