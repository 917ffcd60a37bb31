#include "chainscope/structure.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "chainscope/error.hpp"
#include "chainscope/parallel.hpp"

namespace chainscope {

SccDecomposition scc(const ChainGraph& g) {
    // Iterative Tarjan.
    const std::size_t n = g.n;
    constexpr std::uint32_t kUnvisited = UINT32_MAX;
    std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> call;  // (vertex, next edge offset)
    SccDecomposition out;
    out.component.assign(n, 0);
    std::vector<std::uint32_t> finished_order;  // components in completion order (sinks first)
    std::uint32_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.emplace_back(static_cast<std::uint32_t>(root), g.offsets[root]);
        index[root] = low[root] = counter++;
        stack.push_back(static_cast<std::uint32_t>(root));
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e < g.offsets[v + 1]) {
                const std::uint32_t w = g.targets[e++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, g.offsets[w]);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::uint32_t vv = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[vv]);
            if (low[vv] == index[vv]) {
                const auto id = static_cast<std::uint32_t>(out.count++);
                std::uint32_t members = 0;
                for (;;) {
                    const std::uint32_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    out.component[w] = id;
                    ++members;
                    if (w == vv) break;
                }
                out.size.push_back(members);
                finished_order.push_back(id);
            }
        }
    }
    out.nontrivial.assign(out.count, 0);
    for (std::size_t c = 0; c < out.count; ++c) out.nontrivial[c] = out.size[c] > 1;
    for (std::size_t v = 0; v < n; ++v)
        if (g.has_edge(v, v)) out.nontrivial[out.component[v]] = 1;
    out.topological.assign(finished_order.rbegin(), finished_order.rend());
    return out;
}

Bitset chain_recurrent_vertices(const ChainGraph& g) {
    const SccDecomposition s = scc(g);
    Bitset out(g.n);
    for (std::size_t v = 0; v < g.n; ++v)
        if (s.nontrivial[s.component[v]]) out.set(v);
    return out;
}

bool is_chain_transitive(const ChainGraph& g) {
    if (g.n == 0) return false;
    const SccDecomposition s = scc(g);
    return s.count == 1 && s.nontrivial[0];
}

namespace {

std::vector<std::int64_t> bfs_levels(const ChainGraph& g, std::size_t root) {
    std::vector<std::int64_t> level(g.n, -1);
    std::vector<std::uint32_t> queue;
    queue.reserve(g.n);
    level[root] = 0;
    queue.push_back(static_cast<std::uint32_t>(root));
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        for (auto v : g.successors(u))
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
    }
    return level;
}

std::size_t period_from_levels(const ChainGraph& g, const std::vector<std::int64_t>& level) {
    std::int64_t k = 0;
    for (std::size_t u = 0; u < g.n; ++u)
        for (auto v : g.successors(u)) k = std::gcd(k, level[u] + 1 - level[v]);
    return static_cast<std::size_t>(k < 0 ? -k : k);
}

void require_strongly_connected(const ChainGraph& g, const char* what) {
    if (!is_chain_transitive(g))
        invalid(std::string(what) + " needs a strongly connected graph with at least one cycle");
}

}  // namespace

std::size_t period(const ChainGraph& g) {
    require_strongly_connected(g, "period");
    return period_from_levels(g, bfs_levels(g, 0));
}

CyclicStructure cyclic_classes(const ChainGraph& g, std::size_t root) {
    require_strongly_connected(g, "cyclic_classes");
    if (root >= g.n) invalid("cyclic_classes root out of range");
    const auto level = bfs_levels(g, root);
    CyclicStructure cs;
    cs.k = period_from_levels(g, level);
    cs.label.resize(g.n);
    for (std::size_t v = 0; v < g.n; ++v) cs.label[v] = static_cast<std::uint32_t>(level[v] % static_cast<std::int64_t>(cs.k));
    cs.next.resize(cs.k);
    for (std::size_t i = 0; i < cs.k; ++i) cs.next[i] = static_cast<std::uint32_t>((i + 1) % cs.k);
    return cs;
}

long long frobenius_threshold(long long m, long long n) {
    if (m < 1 || n < 1) invalid("frobenius_threshold needs positive arguments");
    if (std::gcd(m, n) != 1) invalid("frobenius_threshold needs coprime arguments, got gcd " + std::to_string(std::gcd(m, n)));
    return m * n - m - n;
}

std::string StructureLadder::verdict_text() const {
    std::ostringstream os;
    switch (verdict) {
        case LadderVerdict::StabilizedPeriodic: os << "stabilized-periodic(" << stable_k << ")"; break;
        case LadderVerdict::AddingMachineEvidence: {
            os << "adding-machine-evidence(J=(";
            for (std::size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i];
            os << "))";
            break;
        }
        case LadderVerdict::NotChainTransitive: os << "not-chain-transitive-at(" << failing_eps << ")"; break;
        case LadderVerdict::Inconclusive: os << "inconclusive"; break;
    }
    return os.str();
}

StructureLadder classify_ladder(std::vector<LadderRung> rungs) {
    StructureLadder out;
    out.rungs = std::move(rungs);
    const auto& r = out.rungs;
    if (r.empty()) invalid("empty eps ladder");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i].eps < r[i - 1].eps)) invalid("eps ladder must be strictly decreasing");

    for (const auto& rung : r)
        if (!rung.transitive) {
            out.verdict = LadderVerdict::NotChainTransitive;
            out.failing_eps = rung.eps;
            return out;
        }
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i].k % r[i - 1].k != 0) out.divisibility_violations.emplace_back(i - 1, i);

    const std::size_t half = r.size() / 2;
    const bool constant_tail =
        std::all_of(r.begin() + static_cast<long>(half), r.end(), [&](const LadderRung& x) { return x.k == r.back().k; });
    if (constant_tail) {
        out.verdict = LadderVerdict::StabilizedPeriodic;
        out.stable_k = r.back().k;
        return out;
    }
    // Longest run of strict, divisible increases that reaches the last rung.
    std::size_t start = r.size() - 1;
    while (start > 0 && r[start].k > r[start - 1].k && r[start].k % r[start - 1].k == 0) --start;
    const std::size_t increases = r.size() - 1 - start;
    if (increases >= kAddingMachineMinIncreases) {
        out.verdict = LadderVerdict::AddingMachineEvidence;
        std::size_t prev = 1;
        for (std::size_t i = start; i < r.size(); ++i) {
            const std::size_t factor = r[i].k / prev;
            if (factor > 1) out.J.push_back(factor);  // a leading k = 1 contributes no factor
            prev = r[i].k;
        }
        return out;
    }
    out.verdict = LadderVerdict::Inconclusive;
    return out;
}

StructureLadder structure_ladder(const SystemSpec& system, const std::vector<double>& eps_ladder,
                                 const ResolutionPolicy& policy, GraphMode mode) {
    for (std::size_t i = 1; i < eps_ladder.size(); ++i)
        if (!(eps_ladder[i] < eps_ladder[i - 1])) invalid("eps ladder must be strictly decreasing");
    if (eps_ladder.empty()) invalid("empty eps ladder");
    std::vector<LadderRung> rungs(eps_ladder.size());
    // Rungs are independent; graph construction inside is itself parallel, so
    // the rungs run one after another.
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        const double eps = eps_ladder[i];
        const Cover cover = policy_cover(system, eps, policy);
        const ChainGraph g = build_chain_graph(cover, system, eps, mode);
        LadderRung& rung = rungs[i];
        rung.eps = eps;
        rung.cells = cover.size();
        rung.mode = mode;
        rung.eps_lo = g.eps_lo;
        rung.eps_hi = g.eps_hi;
        const SccDecomposition s = scc(g);
        rung.nontrivial_components = static_cast<std::size_t>(std::count(s.nontrivial.begin(), s.nontrivial.end(), 1));
        rung.transitive = s.count == 1 && s.nontrivial[0];
        rung.k = rung.transitive ? period(g) : 0;
    }
    return classify_ladder(std::move(rungs));
}

}  // namespace chainscope
