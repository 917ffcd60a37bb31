#pragma once

// Uniform ball covers. All cells share one radius rho; centers are stored
// column-wise so distance rows can be computed with the vector kernels.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainscope/system.hpp"

namespace chainscope {

struct Cover {
    std::string system_description;
    double rho = 0;
    // Symbolic truncations: one cell per point of the finite space, so the
    // transition graph is the exact one.
    bool exact = false;
    std::vector<std::vector<double>> coords;          // coords[dim][cell]
    std::vector<std::vector<std::uint8_t>> symbols;   // symbols[dim][cell]
    // Product covers keep their factors; cell index = i_a * size(b) + i_b.
    std::shared_ptr<const Cover> factor_a, factor_b;

    std::size_t size() const { return cell_count; }
    Point center(std::size_t i) const;

    std::size_t cell_count = 0;
};

Cover build_cover(const SystemSpec& system, std::size_t n_cells);
Cover product_cover(const Cover& a, const Cover& b, const SystemSpec& product);

// Number of cells of the exact cover of a symbolic system (empty otherwise).
std::optional<std::size_t> natural_cell_count(const SystemSpec& system);

struct ResolutionPolicy {
    double rho_fraction = 0.125;        // rho <= eps * rho_fraction
    std::size_t max_cells = 1u << 16;   // refuse covers larger than this
};

// Cover meeting the policy at this eps: uniform grids use the smallest power
// of two cells per unit length with rho <= eps * rho_fraction. Throws
// InfeasibleResolution when that needs more than max_cells.
Cover policy_cover(const SystemSpec& system, double eps, const ResolutionPolicy& policy = {});

// (max(0, eps - (1+c) 2 rho), eps + (1+c) 2 rho).
std::pair<double, double> certified_bracket(double eps, double c, double rho);
// Bracket for a cover; exact covers give (eps, eps).
std::pair<double, double> soundness_margin(const Cover& cover, const SystemSpec& system, double eps);

// out[i] = d(y, center_i) for every cell.
void distance_row(const SystemSpec& system, const Cover& cover, const Point& y, double* out);

}  // namespace chainscope
