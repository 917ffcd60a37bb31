#include "chainscope/cover.hpp"

#include <algorithm>
#include <cmath>

#include "chainscope/error.hpp"
#include "chainscope/kernels.hpp"

namespace chainscope {
namespace {

std::size_t isqrt_exact(std::size_t n) {
    auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n ? r : 0;
}

std::size_t next_pow2(double x) {
    std::size_t n = 1;
    while (static_cast<double>(n) < x) {
        n <<= 1;
        if (n == 0) return 0;
    }
    return n;
}

void distance_row_at(const SystemSpec& sys, const Cover& cover, const double* yx, const std::uint8_t* ys,
                     double* out) {
    const auto& k = kernels::active();
    const std::size_t n = cover.size();
    switch (sys.kind) {
        case SystemKind::CircleRotation:
        case SystemKind::Doubling: k.arc_distance_row(cover.coords[0].data(), n, yx[0], out); return;
        case SystemKind::IntervalMap: k.line_distance_row(cover.coords[0].data(), n, yx[0], out); return;
        case SystemKind::TwoCircle: {
            k.arc_distance_row(cover.coords[0].data(), n, yx[0], out);
            const double gap = sys.as<TwoCircleParams>().gap;
            const auto& b = cover.symbols[0];
            for (std::size_t i = 0; i < n; ++i)
                if (b[i] != ys[0]) out[i] += gap;
            return;
        }
        case SystemKind::FiniteShift:
        case SystemKind::Odometer: {
            const std::size_t L = sys.symbol_dims;
            std::fill(out, out + n, 0.0);
            double w = 0.5;
            for (std::size_t d = 0; d < L; ++d, w *= 0.5) {
                const auto& col = cover.symbols[d];
                for (std::size_t i = 0; i < n; ++i)
                    if (col[i] != ys[d]) out[i] += w;
            }
            return;
        }
        case SystemKind::Product: {
            const auto& p = sys.as<ProductParams>();
            const Cover& ca = *cover.factor_a;
            const Cover& cb = *cover.factor_b;
            std::vector<double> ra(ca.size()), rb(cb.size());
            distance_row_at(*p.a, ca, yx, ys, ra.data());
            distance_row_at(*p.b, cb, yx + p.a->real_dims, ys + p.a->symbol_dims, rb.data());
            const std::size_t nb = cb.size();
            std::vector<double> broadcast(nb);
            for (std::size_t ia = 0; ia < ca.size(); ++ia) {
                double* seg = out + ia * nb;
                std::copy(rb.begin(), rb.end(), seg);
                std::fill(broadcast.begin(), broadcast.end(), ra[ia]);
                k.max_into(seg, broadcast.data(), nb);
            }
            return;
        }
        case SystemKind::Power: distance_row_at(*sys.as<PowerParams>().base, cover, yx, ys, out); return;
    }
}

Cover grid_cover(const SystemSpec& system, std::size_t n, bool circle) {
    Cover c;
    c.system_description = system.describe();
    c.cell_count = n;
    c.rho = 0.5 / static_cast<double>(n);
    c.coords.assign(1, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        c.coords[0][i] = circle ? static_cast<double>(i) / static_cast<double>(n)
                                : (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return c;
}

Cover word_cover(const SystemSpec& system, const std::vector<std::vector<std::uint8_t>>& words) {
    Cover c;
    c.system_description = system.describe();
    c.cell_count = words.size();
    c.exact = true;
    c.rho = std::ldexp(1.0, -static_cast<int>(system.symbol_dims));
    c.symbols.assign(system.symbol_dims, std::vector<std::uint8_t>(words.size()));
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t d = 0; d < system.symbol_dims; ++d) c.symbols[d][i] = words[i][d];
    return c;
}

std::vector<std::vector<std::uint8_t>> odometer_words(std::size_t L) {
    // Cell index = the binary number the word represents (first symbol least significant).
    std::vector<std::vector<std::uint8_t>> words(std::size_t{1} << L, std::vector<std::uint8_t>(L));
    for (std::size_t v = 0; v < words.size(); ++v)
        for (std::size_t d = 0; d < L; ++d) words[v][d] = static_cast<std::uint8_t>((v >> d) & 1u);
    return words;
}

}  // namespace

Point Cover::center(std::size_t i) const {
    Point p;
    p.x.reserve(coords.size());
    for (const auto& col : coords) p.x.push_back(col[i]);
    p.s.reserve(symbols.size());
    for (const auto& col : symbols) p.s.push_back(col[i]);
    return p;
}

std::optional<std::size_t> natural_cell_count(const SystemSpec& system) {
    switch (system.kind) {
        case SystemKind::Odometer: return std::size_t{1} << system.symbol_dims;
        case SystemKind::FiniteShift: return shift_words(system.as<FiniteShiftParams>()).size();
        case SystemKind::Power: return natural_cell_count(*system.as<PowerParams>().base);
        case SystemKind::Product: {
            const auto& p = system.as<ProductParams>();
            auto a = natural_cell_count(*p.a), b = natural_cell_count(*p.b);
            if (a && b) return *a * *b;
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

Cover build_cover(const SystemSpec& system, std::size_t n) {
    if (n < 2) invalid("a cover needs at least 2 cells, got " + std::to_string(n));
    switch (system.kind) {
        case SystemKind::CircleRotation:
        case SystemKind::Doubling: return grid_cover(system, n, true);
        case SystemKind::IntervalMap: return grid_cover(system, n, false);
        case SystemKind::TwoCircle: {
            if (n % 2 != 0 || n < 4) invalid("two-circle covers need an even cell count >= 4 (cells per circle x 2)");
            const std::size_t m = n / 2;
            Cover c;
            c.system_description = system.describe();
            c.cell_count = n;
            c.rho = 0.5 / static_cast<double>(m);
            c.coords.assign(1, std::vector<double>(n));
            c.symbols.assign(1, std::vector<std::uint8_t>(n));
            for (std::size_t i = 0; i < n; ++i) {
                c.coords[0][i] = static_cast<double>(i % m) / static_cast<double>(m);
                c.symbols[0][i] = static_cast<std::uint8_t>(i / m);
            }
            return c;
        }
        case SystemKind::Odometer: {
            const std::size_t want = std::size_t{1} << system.symbol_dims;
            if (n != want)
                invalid("odometer L=" + std::to_string(system.symbol_dims) + " covers have exactly " +
                        std::to_string(want) + " cells (one per word), got " + std::to_string(n));
            return word_cover(system, odometer_words(system.symbol_dims));
        }
        case SystemKind::FiniteShift: {
            const auto words = shift_words(system.as<FiniteShiftParams>());
            if (n != words.size())
                invalid("this finite shift has exactly " + std::to_string(words.size()) +
                        " allowed periodic words, so its cover has that many cells; got " + std::to_string(n));
            return word_cover(system, words);
        }
        case SystemKind::Power: {
            Cover c = build_cover(*system.as<PowerParams>().base, n);
            c.system_description = system.describe();
            return c;
        }
        case SystemKind::Product: {
            const auto& p = system.as<ProductParams>();
            auto na = natural_cell_count(*p.a), nb = natural_cell_count(*p.b);
            std::size_t ca = 0, cb = 0;
            if (na && nb) {
                ca = *na;
                cb = *nb;
            } else if (na) {
                ca = *na;
                cb = n % ca == 0 ? n / ca : 0;
            } else if (nb) {
                cb = *nb;
                ca = n % cb == 0 ? n / cb : 0;
            } else {
                ca = cb = isqrt_exact(n);
            }
            if (ca * cb != n || ca < 2 || cb < 2)
                invalid("product cover with " + std::to_string(n) +
                        " cells cannot be split into factor covers (use a square count, or a multiple of the "
                        "symbolic factor's word count)");
            return product_cover(build_cover(*p.a, ca), build_cover(*p.b, cb), system);
        }
    }
    invalid("unsupported system for covers");
}

Cover product_cover(const Cover& a, const Cover& b, const SystemSpec& product) {
    Cover c;
    c.system_description = product.describe();
    c.cell_count = a.size() * b.size();
    c.rho = std::max(a.rho, b.rho);
    c.exact = a.exact && b.exact;
    c.factor_a = std::make_shared<const Cover>(a);
    c.factor_b = std::make_shared<const Cover>(b);
    const std::size_t nb = b.size();
    for (const auto& col : a.coords) {
        std::vector<double> v(c.cell_count);
        for (std::size_t i = 0; i < c.cell_count; ++i) v[i] = col[i / nb];
        c.coords.push_back(std::move(v));
    }
    for (const auto& col : b.coords) {
        std::vector<double> v(c.cell_count);
        for (std::size_t i = 0; i < c.cell_count; ++i) v[i] = col[i % nb];
        c.coords.push_back(std::move(v));
    }
    for (const auto& col : a.symbols) {
        std::vector<std::uint8_t> v(c.cell_count);
        for (std::size_t i = 0; i < c.cell_count; ++i) v[i] = col[i / nb];
        c.symbols.push_back(std::move(v));
    }
    for (const auto& col : b.symbols) {
        std::vector<std::uint8_t> v(c.cell_count);
        for (std::size_t i = 0; i < c.cell_count; ++i) v[i] = col[i % nb];
        c.symbols.push_back(std::move(v));
    }
    return c;
}

namespace {

std::size_t policy_count(const SystemSpec& system, double eps, const ResolutionPolicy& policy) {
    const double max_rho = eps * policy.rho_fraction;
    switch (system.kind) {
        case SystemKind::CircleRotation:
        case SystemKind::Doubling:
        case SystemKind::IntervalMap: return std::max<std::size_t>(2, next_pow2(0.5 / max_rho));
        case SystemKind::TwoCircle: return 2 * std::max<std::size_t>(2, next_pow2(0.5 / max_rho));
        case SystemKind::Odometer:
        case SystemKind::FiniteShift: return *natural_cell_count(system);
        case SystemKind::Power: return policy_count(*system.as<PowerParams>().base, eps, policy);
        case SystemKind::Product: break;
    }
    return 0;
}

}  // namespace

Cover policy_cover(const SystemSpec& system, double eps, const ResolutionPolicy& policy) {
    if (!(eps > 0)) invalid("eps must be positive");
    auto too_large = [&](double cells) {
        throw Error(ErrorKind::InfeasibleResolution,
                    "eps=" + std::to_string(eps) + " needs about " + std::to_string(static_cast<long long>(cells)) +
                        " cells for " + system.describe() + ", above the limit of " +
                        std::to_string(policy.max_cells),
                    "raise the cell limit (--max-cells), use a larger eps, or relax the rho/eps ratio");
    };
    if (system.kind == SystemKind::Product) {
        const auto& p = system.as<ProductParams>();
        const Cover a = policy_cover(*p.a, eps, {policy.rho_fraction, policy.max_cells});
        const Cover b = policy_cover(*p.b, eps, {policy.rho_fraction, policy.max_cells});
        const double total = static_cast<double>(a.size()) * static_cast<double>(b.size());
        if (total > static_cast<double>(policy.max_cells)) too_large(total);
        return product_cover(a, b, system);
    }
    const std::size_t n = policy_count(system, eps, policy);
    if (n == 0 || n > policy.max_cells) too_large(n == 0 ? 1e300 : static_cast<double>(n));
    return build_cover(system, n);
}

std::pair<double, double> certified_bracket(double eps, double c, double rho) {
    const double slack = (1 + c) * 2 * rho;
    return {std::max(0.0, eps - slack), eps + slack};
}

std::pair<double, double> soundness_margin(const Cover& cover, const SystemSpec& system, double eps) {
    if (cover.exact) return {eps, eps};
    return certified_bracket(eps, system.lipschitz_c, cover.rho);
}

void distance_row(const SystemSpec& system, const Cover& cover, const Point& y, double* out) {
    distance_row_at(system, cover, y.x.data(), y.s.data(), out);
}

}  // namespace chainscope
