#include "chainscope/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "chainscope/error.hpp"
#include "chainscope/kernels.hpp"
#include "chainscope/recurrence.hpp"

namespace chainscope {
namespace {

std::size_t unit_ball_count(double alpha) {
    // ceil(1/(2 alpha)) with a little tolerance for alphas like 0.05 that are
    // not exact in binary
    if (alpha >= 0.5) return 1;
    const double x = 1.0 / (2.0 * alpha);
    return static_cast<std::size_t>(std::ceil(x - 1e-9 * x));
}

std::size_t greedy_cover(const SystemSpec& system, const Cover& points, double alpha) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::uint32_t>> ball(n);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        distance_row(system, points, points.center(i), row.data());
        for (std::size_t j = 0; j < n; ++j)
            if (row[j] <= alpha) ball[i].push_back(static_cast<std::uint32_t>(j));
    }
    std::vector<std::uint8_t> covered(n, 0);
    std::size_t remaining = n, count = 0;
    while (remaining > 0) {
        std::size_t best = 0, best_gain = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t gain = 0;
            for (auto j : ball[i]) gain += covered[j] ? 0 : 1;
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        for (auto j : ball[best])
            if (!covered[j]) {
                covered[j] = 1;
                --remaining;
            }
        ++count;
    }
    return count;
}

NspanCount count_one(const SystemSpec& system, double alpha) {
    switch (system.kind) {
        case SystemKind::CircleRotation:
        case SystemKind::Doubling:
        case SystemKind::IntervalMap: return {alpha, unit_ball_count(alpha), true};
        case SystemKind::TwoCircle:
            if (alpha < system.as<TwoCircleParams>().gap) return {alpha, 2 * unit_ball_count(alpha), true};
            return {alpha, greedy_cover(system, build_cover(system, 2 * std::max<std::size_t>(2, 4 * unit_ball_count(alpha))), alpha), false};
        case SystemKind::Odometer:
        case SystemKind::FiniteShift: {
            const Cover points = build_cover(system, *natural_cell_count(system));
            return {alpha, greedy_cover(system, points, alpha), false};
        }
        case SystemKind::Power: return count_one(*system.as<PowerParams>().base, alpha);
        case SystemKind::Product: {
            const auto& p = system.as<ProductParams>();
            const NspanCount a = count_one(*p.a, alpha), b = count_one(*p.b, alpha);
            return {alpha, a.count * b.count, false};
        }
    }
    return {alpha, 0, false};
}

}  // namespace

std::vector<NspanCount> nspan_counts(const SystemSpec& system, const std::vector<double>& alphas) {
    std::vector<NspanCount> out;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0)) invalid("covering radii must be positive");
        if (i > 0 && !(alphas[i] < alphas[i - 1])) invalid("covering radii must be decreasing");
        out.push_back(count_one(system, alphas[i]));
    }
    return out;
}

BoxDimFit box_dimension_estimate(const std::vector<NspanCount>& counts) {
    if (counts.size() < 4) invalid("box dimension fit needs at least 4 ladder points");
    std::vector<double> xs, ys;
    for (const auto& c : counts) {
        if (c.count == 0 || !(c.alpha > 0)) invalid("box dimension fit needs positive counts and radii");
        xs.push_back(std::log(1.0 / c.alpha));
        ys.push_back(std::log(static_cast<double>(c.count)));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0) invalid("degenerate ladder: all radii equal");
    BoxDimFit fit;
    fit.d = sxy / sxx;
    fit.intercept = my - fit.d * mx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.d * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

double EntropyReport::bound_bits() const { return bound / std::log(2.0); }

EntropyReport entropy_lower_bound(std::vector<EntropyGridPoint> grid, double d) {
    if (grid.empty()) invalid("entropy_lower_bound needs a nonempty grid");
    EntropyReport rep;
    rep.d = d;
    for (auto& p : grid) p.h_bound = p.m && *p.m > 0 ? d * std::log(1.0 / p.delta) / static_cast<double>(*p.m) : 0.0;
    std::map<double, EntropyGridPoint> best;  // delta -> point at the smallest eps with m defined
    for (const auto& p : grid) {
        if (!p.m) continue;
        auto it = best.find(p.delta);
        if (it == best.end() || p.eps < it->second.eps) best[p.delta] = p;
    }
    for (auto it = best.rbegin(); it != best.rend(); ++it) rep.per_delta.push_back(it->second);  // decreasing delta
    for (const auto& p : rep.per_delta) rep.bound = std::max(rep.bound, p.h_bound);
    if (!rep.per_delta.empty()) rep.bound_finest_delta = rep.per_delta.back().h_bound;
    rep.grid = std::move(grid);
    return rep;
}

EntropyReport entropy_from_graphs(const SystemSpec& system, const std::vector<double>& deltas,
                                  const std::vector<double>& eps_ladder, GraphMode mode,
                                  std::optional<std::size_t> cells, const ResolutionPolicy& policy, double d) {
    std::vector<EntropyGridPoint> grid;
    for (double eps : eps_ladder) {
        const Cover cover = cells ? build_cover(system, *cells) : policy_cover(system, eps, policy);
        const ChainGraph g = build_chain_graph(cover, system, eps, mode);
        for (double delta : deltas) {
            if (!(delta > eps)) continue;
            EntropyGridPoint p;
            p.delta = delta;
            p.eps = eps;
            MixingOptions opts;
            opts.compute_primitivity = false;
            try {
                p.m = mixing_time(g, cover, system, delta, opts).m_hat;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::InfeasibleResolution) throw;
                continue;
            }
            grid.push_back(p);
        }
    }
    if (grid.empty())
        throw Error(ErrorKind::InfeasibleResolution, "no (delta, eps) pair with delta > eps could be resolved",
                    "use deltas larger than the eps values, or more cells");
    return entropy_lower_bound(std::move(grid), d);
}

double path_growth_rate(const ChainGraph& g) {
    if (g.n == 0) invalid("path_growth_rate needs a nonempty graph");
    const auto& k = kernels::active();
    std::vector<double> x(g.n, 1.0 / static_cast<double>(g.n)), next(g.n), ones(g.n, 1.0);
    std::vector<double> log_growth;
    double prev = -1;
    for (int it = 0; it < 1000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t v = 0; v < g.n; ++v) {
            if (x[v] == 0) continue;
            for (std::uint32_t r = g.run_offsets[v]; r < g.run_offsets[v + 1]; ++r) {
                const auto [lo, hi] = g.runs[r];
                k.add_scaled_into(next.data() + lo, ones.data(), x[v], hi - lo);
            }
        }
        double total = 0;
        for (double v : next) total += v;
        if (total <= 0) return 0.0;  // every walk dies out
        for (std::size_t v = 0; v < g.n; ++v) x[v] = next[v] / total;
        log_growth.push_back(std::log(total));
        if (prev > 0 && std::fabs(total - prev) <= 1e-6 * total) return std::log(total);
        prev = total;
    }
    // Not settled (e.g. a periodic graph whose ratios oscillate): average the
    // last 100 steps.
    const std::size_t tail = std::min<std::size_t>(100, log_growth.size());
    double s = 0;
    for (std::size_t i = log_growth.size() - tail; i < log_growth.size(); ++i) s += log_growth[i];
    return s / static_cast<double>(tail);
}

}  // namespace chainscope
