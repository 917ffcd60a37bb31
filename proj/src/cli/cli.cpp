#include "chainscope/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "chainscope/chain_graph.hpp"
#include "chainscope/cover.hpp"
#include "chainscope/entropy.hpp"
#include "chainscope/error.hpp"
#include "chainscope/graph_io.hpp"
#include "chainscope/oracles.hpp"
#include "chainscope/parallel.hpp"
#include "chainscope/recurrence.hpp"
#include "chainscope/structure.hpp"
#include "chainscope/subshift.hpp"

namespace chainscope::cli {
namespace {

constexpr std::size_t kRecurrenceCellLimit = 200000;

struct Common {
    unsigned jobs = 0;
    std::uint64_t seed = 1;
    bool timings = false;
    bool json = false;
    std::string out;
};

struct SystemArgs {
    std::string system;
    std::vector<std::string> params;
    std::string config;
    bool given() const { return !system.empty() || !config.empty(); }
};

struct PolicyArgs {
    double rho_fraction = 0.125;
    std::size_t max_cells = 1u << 16;
    ResolutionPolicy policy() const { return {rho_fraction, max_cells}; }
};

// Options that only choose where output goes; they stay out of the manifest
// so that reports do not depend on them.
const std::set<std::string> kUnrecorded{"--out", "--json", "--csv", "--cover-out", "--report", "--timings", "--jobs",
                                         "--system", "--param", "--config"};

void add_common(CLI::App* app, Common& c, bool out_option = true) {
    app->add_option("--jobs", c.jobs, "worker threads (default: CHAINSCOPE_JOBS or all cores)");
    app->add_flag("--timings", c.timings, "record wall time per stage in the report");
    app->add_flag("--json", c.json, "print the JSON report instead of the table");
    if (out_option) app->add_option("--out", c.out, "write the JSON report to this file");
}

void add_system(CLI::App* app, SystemArgs& s) {
    app->add_option("--system", s.system,
                    "rotation | doubling | square | tent | logistic | piecewise | finite-shift | odometer | "
                    "two-circle | product | power");
    app->add_option("--param", s.params, "system parameter key=value (repeatable)")->allow_extra_args(false);
    app->add_option("--config", s.config, "system config file (key = value lines)");
}

void add_policy(CLI::App* app, PolicyArgs& p) {
    app->add_option("--max-cells", p.max_cells, "refuse covers larger than this");
    app->add_option("--rho-fraction", p.rho_fraction, "cover radius limit as a fraction of eps");
}

ConfigMap system_config(const SystemArgs& s) {
    ConfigMap cfg;
    if (!s.config.empty()) cfg = read_config_file(s.config);
    if (!s.system.empty()) cfg["system"] = s.system;
    for (const auto& p : s.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) invalid("--param expects key=value, got '" + p + "'");
        cfg[p.substr(0, eq)] = p.substr(eq + 1);
    }
    if (!cfg.count("system")) invalid("no system given", "pass --system <name> or --config <file>");
    return cfg;
}

double parse_positive(const std::string& text, const char* what) {
    const double v = to_double(parse_rational(text));
    if (!(v > 0)) invalid(std::string(what) + " must be positive");
    return v;
}

class Stopwatch {
public:
    explicit Stopwatch(RunManifest& m) : m_(m), t_(std::chrono::steady_clock::now()) {}
    void lap(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        m_.stage_seconds.emplace_back(stage, std::chrono::duration<double>(now - t_).count());
        t_ = now;
    }

private:
    RunManifest& m_;
    std::chrono::steady_clock::time_point t_;
};

void record_parameters(const CLI::App* app, RunManifest& m) {
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->count() == 0 || opt->get_lnames().empty()) continue;
        const std::string name = "--" + opt->get_lnames().front();
        if (kUnrecorded.count(name)) continue;
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
        m.parameters[opt->get_lnames().front()] = joined.empty() ? "true" : joined;
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

void emit(const Common& c, const RunManifest& manifest, const Json& result, const std::string& table, std::ostream& out) {
    Json report;
    report["schema"] = kSchemaVersion;
    report["manifest"] = manifest.to_json();
    report["result"] = result;
    const std::string text = dump_json(report);
    if (!c.out.empty()) write_file(c.out, text);
    out << (c.json ? text : table);
}

Json opt_json(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }
std::string opt_str(const std::optional<std::uint64_t>& v, const char* none = "none") {
    return v ? std::to_string(*v) : none;
}

Json graph_json(const ChainGraph& g) {
    Json j;
    j["vertices"] = g.n;
    j["edges"] = g.edge_count();
    j["eps"] = g.eps;
    j["rho"] = g.rho;
    j["mode"] = to_string(g.mode);
    j["exact"] = g.exact;
    j["eps_lo"] = g.eps_lo;
    j["eps_hi"] = g.eps_hi;
    j["system"] = g.system_description;
    return j;
}

std::string graph_line(const ChainGraph& g) {
    std::ostringstream s;
    s << g.system_description << ": " << g.n << " cells, " << g.edge_count() << " edges, eps " << fmt_double(g.eps)
      << ", rho " << fmt_double(g.rho) << ", mode " << to_string(g.mode) << (g.exact ? " (exact)" : "")
      << ", bracket (" << fmt_double(g.eps_lo) << ", " << fmt_double(g.eps_hi) << ")\n";
    return s.str();
}

// Graph input shared by structure / recurrence / mixing: either a saved graph
// (with an optional saved cover) or a system built on the spot.
struct GraphSource {
    std::string graph_path;
    std::string cover_path;
    SystemArgs system;
    std::string eps;
    std::optional<std::size_t> cells;
    std::string mode = "outer";
    PolicyArgs policy;
};

void add_graph_source(CLI::App* app, GraphSource& src, bool with_cover) {
    app->add_option("--graph", src.graph_path, "saved graph (.adj or binary)");
    if (with_cover) app->add_option("--cover", src.cover_path, "saved cover (.cov) matching the graph");
    add_system(app, src.system);
    app->add_option("--eps", src.eps, "eps when building from --system");
    app->add_option("--cells", src.cells, "cell count (default: resolution policy at eps)");
    app->add_option("--mode", src.mode, "outer | inner");
    add_policy(app, src.policy);
}

struct Loaded {
    ChainGraph graph;
    std::optional<SystemSpec> system;
    std::optional<Cover> cover;
};

Loaded load_source(const GraphSource& src, bool need_cover, RunManifest& manifest) {
    Loaded l;
    if (!src.graph_path.empty()) {
        if (src.system.given()) invalid("give either --graph or --system, not both");
        l.graph = load_graph(src.graph_path);
        manifest.parameters["graph_system"] = l.graph.system_description;
        if (!src.cover_path.empty()) {
            auto [sys, cov] = load_cover(src.cover_path);
            if (cov.size() != l.graph.n)
                invalid("cover has " + std::to_string(cov.size()) + " cells but the graph has " +
                        std::to_string(l.graph.n) + " vertices");
            if (cov.system_description != l.graph.system_description)
                invalid("cover is for " + cov.system_description + " but the graph is for " + l.graph.system_description);
            l.system = std::move(sys);
            l.cover = std::move(cov);
        } else if (need_cover) {
            invalid("--graph needs a matching --cover here", "save one with build-graph --cover-out");
        }
        return l;
    }
    if (!src.system.given()) invalid("no input", "pass --graph <file> or --system <name> --eps <eps>");
    if (src.eps.empty()) invalid("--eps is required with --system");
    const ConfigMap cfg = system_config(src.system);
    manifest.system = cfg;
    SystemSpec sys = system_from_config(cfg);
    manifest.system_description = sys.describe();
    const double eps = parse_positive(src.eps, "eps");
    if (!src.cells) {
        manifest.rho_fraction = src.policy.rho_fraction;
        manifest.max_cells = src.policy.max_cells;
    }
    Cover cover = src.cells ? build_cover(sys, *src.cells) : policy_cover(sys, eps, src.policy.policy());
    l.graph = build_chain_graph(cover, sys, eps, parse_mode(src.mode));
    l.system = std::move(sys);
    l.cover = std::move(cover);
    return l;
}

// ---------------------------------------------------------------- build-graph

struct BuildGraphArgs {
    Common common;
    SystemArgs system;
    PolicyArgs policy;
    std::string eps;
    std::optional<std::size_t> cells;
    std::string mode = "outer";
    std::string cover_out;
    std::string report;
};

int cmd_build_graph(const BuildGraphArgs& a, const CLI::App* app, std::ostream& out) {
    RunManifest m;
    m.command = "build-graph";
    m.timings = a.common.timings;
    record_parameters(app, m);
    Stopwatch sw(m);
    m.system = system_config(a.system);
    const SystemSpec sys = system_from_config(m.system);
    m.system_description = sys.describe();
    const double eps = parse_positive(a.eps, "eps");
    if (!a.cells) {
        m.rho_fraction = a.policy.rho_fraction;
        m.max_cells = a.policy.max_cells;
    }
    const Cover cover = a.cells ? build_cover(sys, *a.cells) : policy_cover(sys, eps, a.policy.policy());
    sw.lap("cover");
    const ChainGraph g = build_chain_graph(cover, sys, eps, parse_mode(a.mode));
    sw.lap("graph");
    save_graph(a.common.out, g);
    if (!a.cover_out.empty()) save_cover(a.cover_out, cover, sys);
    sw.lap("write");
    Json result = graph_json(g);
    result["graph_file"] = a.common.out;
    if (!a.cover_out.empty()) result["cover_file"] = a.cover_out;
    Common c = a.common;
    c.out = a.report;
    emit(c, m, result, graph_line(g) + "wrote " + a.common.out + "\n", out);
    return 0;
}

// ---------------------------------------------------------------- structure

struct StructureArgs {
    Common common;
    GraphSource src;
    std::string ladder;
};

int cmd_structure(const StructureArgs& a, const CLI::App* app, std::ostream& out) {
    RunManifest m;
    m.command = "structure";
    m.timings = a.common.timings;
    record_parameters(app, m);
    Stopwatch sw(m);
    Json result;
    std::ostringstream table;
    if (!a.ladder.empty()) {
        if (!a.src.graph_path.empty()) invalid("--eps-ladder needs --system, not --graph");
        if (a.src.cells) invalid("--eps-ladder uses the resolution policy; drop --cells");
        m.system = system_config(a.src.system);
        const SystemSpec sys = system_from_config(m.system);
        m.system_description = sys.describe();
        m.rho_fraction = a.src.policy.rho_fraction;
        m.max_cells = a.src.policy.max_cells;
        const auto ladder = parse_ladder(a.ladder);
        m.ladders["eps"] = ladder;
        const StructureLadder lad = structure_ladder(sys, ladder, a.src.policy.policy(), parse_mode(a.src.mode));
        sw.lap("ladder");
        Json rungs = Json::array();
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : lad.rungs) {
            Json j;
            j["eps"] = r.eps;
            j["k"] = r.k;
            j["transitive"] = r.transitive;
            j["cells"] = r.cells;
            j["mode"] = to_string(r.mode);
            j["eps_lo"] = r.eps_lo;
            j["eps_hi"] = r.eps_hi;
            j["nontrivial_components"] = r.nontrivial_components;
            rungs.push_back(j);
            rows.push_back({fmt_double(r.eps), std::to_string(r.cells), to_string(r.mode), fmt_double(r.eps_lo),
                            fmt_double(r.eps_hi), r.transitive ? "yes" : "no", r.transitive ? std::to_string(r.k) : "-",
                            std::to_string(r.nontrivial_components)});
        }
        result["rungs"] = rungs;
        result["verdict"] = lad.verdict_text();
        if (lad.verdict == LadderVerdict::StabilizedPeriodic) result["stable_k"] = lad.stable_k;
        if (lad.verdict == LadderVerdict::AddingMachineEvidence) result["J"] = lad.J;
        if (lad.verdict == LadderVerdict::NotChainTransitive) result["failing_eps"] = lad.failing_eps;
        Json viol = Json::array();
        for (const auto& [i, j] : lad.divisibility_violations)
            viol.push_back({{"coarse_eps", lad.rungs[i].eps}, {"fine_eps", lad.rungs[j].eps}, {"coarse_k", lad.rungs[i].k},
                            {"fine_k", lad.rungs[j].k}});
        result["divisibility_violations"] = viol;
        table << m.system_description << "\n"
              << format_table({"eps", "cells", "mode", "eps_lo", "eps_hi", "transitive", "k", "recurrent SCCs"}, rows)
              << "verdict: " << lad.verdict_text() << "\n";
        for (const auto& [i, j] : lad.divisibility_violations)
            table << "warning: k=" << lad.rungs[i].k << " at eps " << fmt_double(lad.rungs[i].eps) << " does not divide k="
                  << lad.rungs[j].k << " at eps " << fmt_double(lad.rungs[j].eps) << " (discretization artifact)\n";
        emit(a.common, m, result, table.str(), out);
        return 0;
    }
    Loaded l = load_source(a.src, false, m);
    sw.lap("graph");
    const ChainGraph& g = l.graph;
    const SccDecomposition s = scc(g);
    const Bitset rec = chain_recurrent_vertices(g);
    const bool transitive = s.count == 1 && s.nontrivial[0];
    result["graph"] = graph_json(g);
    result["components"] = s.count;
    result["recurrent_components"] = std::count(s.nontrivial.begin(), s.nontrivial.end(), 1);
    result["chain_recurrent_cells"] = rec.count();
    result["transitive"] = transitive;
    result["component"] = s.component;
    table << graph_line(g) << "components: " << s.count << " ("
          << std::count(s.nontrivial.begin(), s.nontrivial.end(), 1) << " recurrent), chain recurrent cells: "
          << rec.count() << "/" << g.n << "\n"
          << "chain transitive: " << (transitive ? "yes" : "no") << "\n";
    if (transitive) {
        const CyclicStructure cs = cyclic_classes(g);
        std::vector<std::size_t> sizes(cs.k, 0);
        for (auto lab : cs.label) ++sizes[lab];
        result["k"] = cs.k;
        result["class_sizes"] = sizes;
        result["class_next"] = cs.next;
        result["class"] = cs.label;
        const auto p = cs.k == 1 ? primitivity_exponent(g) : std::nullopt;
        result["primitivity_exponent"] = opt_json(p);
        table << "period k: " << cs.k << "\n";
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < cs.k; ++i)
            rows.push_back({std::to_string(i), std::to_string(sizes[i]), std::to_string(cs.next[i])});
        table << format_table({"class", "cells", "next"}, rows);
        if (p) table << "primitivity exponent: " << *p << " (Wielandt bound " << wielandt_bound(g.n) << ")\n";
    }
    sw.lap("analysis");
    emit(a.common, m, result, table.str(), out);
    return 0;
}

// ---------------------------------------------------------------- recurrence

struct RecurrenceArgs {
    Common common;
    GraphSource src;
    std::optional<std::size_t> sample;
};

int cmd_recurrence(const RecurrenceArgs& a, const CLI::App* app, std::ostream& out) {
    RunManifest m;
    m.command = "recurrence";
    m.timings = a.common.timings;
    record_parameters(app, m);
    Stopwatch sw(m);
    Loaded l = load_source(a.src, false, m);
    sw.lap("graph");
    const ChainGraph& g = l.graph;
    if (!a.sample && g.n > kRecurrenceCellLimit)
        throw Error(ErrorKind::InfeasibleResolution,
                    "exact r over " + std::to_string(g.n) + " cells exceeds the limit of " +
                        std::to_string(kRecurrenceCellLimit),
                    "pass --sample N to estimate the maximum from N random cells (reported as a lower bound)");
    if (a.sample) m.seed = a.common.seed;
    const RecurrenceReport r = recurrence_time(g, a.sample, a.common.seed);
    sw.lap("recurrence");
    Json result;
    result["graph"] = graph_json(g);
    Json per = Json::array();
    for (const auto& v : r.per_vertex) per.push_back(v ? Json(*v) : Json(nullptr));
    result["r"] = per;
    result["r_max"] = r.max_r;
    result["argmax"] = r.argmax;
    result["recurrent_cells"] = r.recurrent_count;
    result["evaluated_cells"] = r.evaluated_count;
    result["all_recurrent"] = r.all_recurrent;
    result["sampled"] = r.sampled;
    result["r_max_is_lower_bound"] = r.sampled;
    std::ostringstream t;
    t << graph_line(g) << "r_eps estimate: " << r.max_r << (r.sampled ? " (lower bound from a sample)" : "")
      << " at cell " << r.argmax << "\n"
      << "recurrent cells: " << r.recurrent_count << "/" << r.evaluated_count << " evaluated\n"
      << "valid for true eps in (" << fmt_double(g.eps_lo) << ", " << fmt_double(g.eps_hi) << ")\n";
    emit(a.common, m, result, t.str(), out);
    return 0;
}

// ---------------------------------------------------------------- mixing

struct MixingArgs {
    Common common;
    GraphSource src;
    std::string delta;
    bool no_primitivity = false;
};

int cmd_mixing(const MixingArgs& a, const CLI::App* app, std::ostream& out) {
    RunManifest m;
    m.command = "mixing";
    m.timings = a.common.timings;
    record_parameters(app, m);
    Stopwatch sw(m);
    Loaded l = load_source(a.src, true, m);
    sw.lap("graph");
    const double delta = parse_positive(a.delta, "delta");
    MixingOptions opts;
    opts.compute_primitivity = !a.no_primitivity;
    const MixingReport r = mixing_time(l.graph, *l.cover, *l.system, delta, opts);
    sw.lap("mixing");
    Json result;
    result["graph"] = graph_json(l.graph);
    result["delta"] = delta;
    Json per = Json::array();
    for (const auto& v : r.per_cell) per.push_back(opt_json(v));
    result["m"] = per;
    result["m_hat"] = opt_json(r.m_hat);
    result["diverged"] = r.diverged;
    result["period"] = r.period ? Json(*r.period) : Json(nullptr);
    result["primitivity_exponent"] = opt_json(r.primitivity_exponent);
    result["wielandt_bound"] = r.wielandt;
    result["wielandt_ok"] = r.wielandt_ok;
    result["lipschitz_bound"] = r.lipschitz_bound ? Json(*r.lipschitz_bound) : Json(nullptr);
    result["lipschitz_ok"] = r.lipschitz_ok;
    std::ostringstream t;
    t << graph_line(l.graph) << "m_eps(delta=" << fmt_double(delta) << ") estimate: " << opt_str(r.m_hat)
      << (r.diverged ? " (some start set never fills the space)" : "") << "\n";
    if (r.period) t << "period: " << *r.period << "\n";
    if (opts.compute_primitivity)
        t << "primitivity exponent: " << opt_str(r.primitivity_exponent, "undefined") << ", Wielandt bound "
          << r.wielandt << " " << (r.wielandt_ok ? "ok" : "VIOLATED") << "\n";
    if (r.lipschitz_bound)
        t << "Lipschitz lower bound: " << fmt_double(*r.lipschitz_bound) << " " << (r.lipschitz_ok ? "ok" : "VIOLATED")
          << "\n";
    emit(a.common, m, result, t.str(), out);
    return 0;
}

// ---------------------------------------------------------------- entropy

struct EntropyArgs {
    Common common;
    SystemArgs system;
    PolicyArgs policy;
    std::string delta_ladder;
    std::string eps_ladder;
    std::string mode = "outer";
    std::optional<std::size_t> cells;
    std::optional<double> d;
    std::string csv;
    bool path_growth = false;
};

int cmd_entropy(const EntropyArgs& a, const CLI::App* app, std::ostream& out) {
    RunManifest m;
    m.command = "entropy";
    m.timings = a.common.timings;
    record_parameters(app, m);
    Stopwatch sw(m);
    m.system = system_config(a.system);
    const SystemSpec sys = system_from_config(m.system);
    m.system_description = sys.describe();
    const auto deltas = parse_ladder(a.delta_ladder);
    const auto eps = parse_ladder(a.eps_ladder);
    m.ladders["delta"] = deltas;
    m.ladders["eps"] = eps;
    if (!a.cells) {
        m.rho_fraction = a.policy.rho_fraction;
        m.max_cells = a.policy.max_cells;
    }
    Json result;
    double d = 0;
    bool d_exact = true;
    if (a.d) {
        d = *a.d;
        result["d_source"] = "given";
    } else if (sys.boxdim_lower) {
        d = *sys.boxdim_lower;
        result["d_source"] = "system";
    } else {
        std::vector<double> alphas;
        for (int i = 3; i <= 8; ++i) alphas.push_back(std::ldexp(1.0, -i));
        const auto counts = nspan_counts(sys, alphas);
        d = box_dimension_estimate(counts).d;
        for (const auto& c : counts) d_exact = d_exact && c.exact;
        result["d_source"] = "covering-number fit";
    }
    const EntropyReport rep =
        entropy_from_graphs(sys, deltas, eps, parse_mode(a.mode), a.cells, a.policy.policy(), d);
    sw.lap("grid");
    result["d"] = d;
    result["d_exact"] = d_exact;
    Json grid = Json::array();
    std::ostringstream csv;
    csv << "delta,eps,m,h_bound\n";
    char buf[128];
    for (const auto& p : rep.grid) {
        Json j;
        j["delta"] = p.delta;
        j["eps"] = p.eps;
        j["m"] = opt_json(p.m);
        j["h_bound"] = p.h_bound;
        grid.push_back(j);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", p.delta, p.eps);
        csv << buf << (p.m ? std::to_string(*p.m) : "") << ",";
        std::snprintf(buf, sizeof buf, "%.17g", p.h_bound);
        csv << buf << "\n";
    }
    result["grid"] = grid;
    std::vector<std::vector<std::string>> rows;
    Json per = Json::array();
    for (const auto& p : rep.per_delta) {
        per.push_back({{"delta", p.delta}, {"eps", p.eps}, {"m", opt_json(p.m)}, {"h_bound", p.h_bound}});
        rows.push_back({fmt_double(p.delta), fmt_double(p.eps), opt_str(p.m), fmt_double(p.h_bound)});
    }
    result["per_delta"] = per;
    result["bound"] = rep.bound;
    result["bound_bits"] = rep.bound_bits();
    result["bound_finest_delta"] = rep.bound_finest_delta;
    std::ostringstream t;
    t << m.system_description << ", d = " << fmt_double(d) << (d_exact ? "" : " (estimated)") << "\n"
      << format_table({"delta", "eps", "m", "h_bound"}, rows) << "entropy lower bound: " << fmt_double(rep.bound)
      << " nats (" << fmt_double(rep.bound_bits()) << " bits); at the finest delta " << fmt_double(rep.bound_finest_delta)
      << "\n";
    if (a.path_growth) {
        const double finest = *std::min_element(eps.begin(), eps.end());
        const Cover cover = a.cells ? build_cover(sys, *a.cells) : policy_cover(sys, finest, a.policy.policy());
        const double pg = path_growth_rate(build_chain_graph(cover, sys, finest, parse_mode(a.mode)));
        result["path_growth_rate"] = pg;
        t << "walk-count growth rate at eps " << fmt_double(finest) << ": " << fmt_double(pg) << "\n";
        sw.lap("path-growth");
    }
    if (!a.csv.empty()) write_file(a.csv, csv.str());
    emit(a.common, m, result, t.str(), out);
    return 0;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    Common common;
    std::string alpha;
    std::string eps;
    std::string delta;
    std::size_t terms = 10;
    std::string qmax = "1000";
    std::string matrix;
    std::string word;
};

Json rationals_json(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
}

Json cf_json(const ContinuedFraction& cf) {
    Json j;
    Json qs = Json::array(), conv = Json::array();
    for (std::size_t i = 0; i < cf.quotients.size(); ++i) {
        qs.push_back(cf.quotients[i].str());
        conv.push_back(cf.p[i].str() + "/" + cf.q[i].str());
    }
    j["quotients"] = qs;
    j["convergents"] = conv;
    j["terminated"] = cf.terminated;
    j["precision_bits"] = cf.precision_bits ? Json(*cf.precision_bits) : Json(nullptr);
    return j;
}

std::string cf_table(const ContinuedFraction& cf, const RealInterval& alpha) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < cf.quotients.size(); ++i) {
        const Rational c(cf.p[i], cf.q[i]);
        const double err = std::fabs(alpha.to_double() - to_double(c));
        const double q = to_double(Rational(cf.q[i]));
        rows.push_back({std::to_string(i), cf.quotients[i].str(), cf.p[i].str() + "/" + cf.q[i].str(), fmt_double(err, 4),
                        fmt_double(1 / (q * q), 4)});
    }
    return format_table({"k", "a_k", "p_k/q_k", "|alpha - p/q|", "1/q^2"}, rows) +
           (cf.terminated ? "expansion terminated (alpha is rational)\n" : "");
}

int cmd_oracle(const std::string& which, const OracleArgs& a, const CLI::App* app, std::ostream& out) {
    RunManifest m;
    m.command = "oracle " + which;
    m.timings = a.common.timings;
    record_parameters(app, m);
    Json result;
    std::ostringstream t;
    auto need = [](const std::string& v, const char* name) {
        if (v.empty()) invalid(std::string(name) + " is required");
    };
    if (which == "rotation") {
        need(a.alpha, "--alpha");
        need(a.eps, "--eps");
        const RealInterval alpha = parse_real(a.alpha);
        const Rational eps = parse_rational(a.eps);
        if (eps <= 0) invalid("eps must be positive");
        const Integer r = rotation_recurrence_time(alpha, eps);
        const Integer mt = rotation_mixing_time(eps);
        const auto best = best_approximations(alpha, Integer(a.qmax));
        result["alpha"] = alpha.label;
        result["alpha_interval"] = {to_string(alpha.lo), to_string(alpha.hi)};
        result["eps"] = to_double(eps);
        result["r"] = r.str();
        result["m"] = mt.str();
        result["best_approximations"] = rationals_json(best);
        t << "rotation by " << alpha.label << ", eps " << a.eps << "\n"
          << "r_eps = " << r.str() << "\n"
          << "m_eps(delta) = " << mt.str() << " as delta -> 0 (ceil(1/(2 eps)))\n"
          << "best approximations with q <= " << a.qmax << ":";
        for (const auto& b : best) t << " " << to_string(b);
        t << "\n";
    } else if (which == "doubling") {
        need(a.eps, "--eps");
        const Rational eps = parse_rational(a.eps);
        result["eps"] = to_double(eps);
        const auto r = doubling_recurrence_time(eps);
        result["r"] = r;
        t << "doubling map, eps " << a.eps << "\nr_eps = " << r << "\n";
        if (!a.delta.empty()) {
            const Rational delta = parse_rational(a.delta);
            const auto mt = doubling_mixing_time(eps, delta);
            result["delta"] = to_double(delta);
            result["m"] = mt;
            t << "m_eps(delta=" << a.delta << ") = " << mt << "\n";
        }
    } else if (which == "cf") {
        need(a.alpha, "--alpha");
        const RealInterval alpha = parse_real(a.alpha);
        const ContinuedFraction cf = cf_expand(alpha, a.terms);
        result["alpha"] = alpha.label;
        result["cf"] = cf_json(cf);
        t << "continued fraction of " << alpha.label << "\n" << cf_table(cf, alpha);
    } else if (which == "odometer") {
        need(a.eps, "--eps");
        const Rational eps = parse_rational(a.eps);
        const auto k = odometer_k_ladder(eps);
        result["eps"] = to_double(eps);
        result["k"] = k;
        t << "adding machine, eps " << a.eps << "\nk_eps = " << k << "\n";
    } else if (which == "subshift") {
        need(a.matrix, "--matrix");
        ConfigMap cfg{{"system", "finite-shift"}, {"matrix", a.matrix}};
        const SystemSpec sys = system_from_config(cfg);
        const TransitionMatrix& mat = sys.as<FiniteShiftParams>().matrix;
        const SubshiftStructure s = subshift_structure(mat);
        result["matrix"] = a.matrix;
        result["irreducible"] = s.irreducible;
        result["period"] = s.period ? Json(*s.period) : Json(nullptr);
        result["primitivity_exponent"] = opt_json(s.primitivity_exponent);
        t << "subshift with transition matrix " << a.matrix << "\n"
          << "irreducible: " << (s.irreducible ? "yes" : "no") << "\n";
        if (s.period) t << "period: " << *s.period << "\n";
        if (s.primitivity_exponent) t << "primitivity exponent: " << *s.primitivity_exponent << "\n";
        if (!a.eps.empty()) {
            need(a.word, "--word");
            std::vector<std::uint8_t> word;
            for (char ch : a.word) {
                if (ch < '0' || ch > '9') invalid("--word expects symbol digits, got '" + a.word + "'");
                word.push_back(static_cast<std::uint8_t>(ch - '0'));
            }
            const double eps = parse_positive(a.eps, "eps");
            const auto v = subshift_r_eps_profile(mat, eps, word);
            result["eps"] = eps;
            result["word"] = a.word;
            result["r_generic_upper"] = v;
            t << "r_eps generic upper value at words starting " << a.word << ": " << v << "\n";
        }
    }
    emit(a.common, m, result, t.str(), out);
    return 0;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
    Common common;
    std::string id;
    ScenarioOptions options;
    std::optional<std::size_t> cells;
    std::optional<int> length;
    std::optional<double> gap;
    std::string eps, alpha;
};

int cmd_reproduce(const ReproduceArgs& a, const CLI::App* app, std::ostream& out) {
    RunManifest m;
    m.command = "reproduce " + a.id;
    m.timings = a.common.timings;
    record_parameters(app, m);
    ScenarioOptions o;
    if (!a.eps.empty()) o.eps = a.eps;
    if (!a.alpha.empty()) o.alpha = a.alpha;
    o.cells = a.cells;
    o.length = a.length;
    o.gap = a.gap;
    const std::vector<std::string> ids = a.id == "all" ? scenario_ids() : std::vector<std::string>{a.id};
    Stopwatch sw(m);
    Json result = Json::object();
    std::string table;
    bool pass = true;
    for (const auto& id : ids) {
        const ScenarioOutcome s = run_scenario(id, o);
        sw.lap(id);
        result[id] = s.result;
        table += s.table;
        if (ids.size() > 1) table += "\n";
        pass = pass && s.pass;
    }
    emit(a.common, m, ids.size() == 1 ? result[ids.front()] : result, table, out);
    return pass ? 0 : 1;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument: return 2;
        case ErrorKind::InfeasibleResolution: return 3;
        case ErrorKind::PrecisionExhausted: return 4;
        case ErrorKind::Io: return 1;
    }
    return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"chain recurrence, recurrence and mixing times of discretized maps", "chainscope"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    BuildGraphArgs bg;
    auto* s_build = app.add_subcommand("build-graph", "build a transition graph and save it");
    add_common(s_build, bg.common, false);
    s_build->add_option("--out", bg.common.out, "graph file (.adj text; .bin or .adjb binary)")->required();
    s_build->add_option("--report", bg.report, "write the JSON report to this file");
    add_system(s_build, bg.system);
    add_policy(s_build, bg.policy);
    s_build->add_option("--eps", bg.eps, "jump size")->required();
    s_build->add_option("--cells", bg.cells, "cell count (default: resolution policy)");
    s_build->add_option("--mode", bg.mode, "outer | inner");
    s_build->add_option("--cover-out", bg.cover_out, "also save the cover (.cov)");

    StructureArgs st;
    auto* s_struct = app.add_subcommand("structure", "SCCs, period and cyclic classes; or the period ladder across eps");
    add_common(s_struct, st.common);
    add_graph_source(s_struct, st.src, false);
    s_struct->add_option("--eps-ladder", st.ladder, "start:end:geometric:count (builds one graph per eps)");

    RecurrenceArgs rc;
    auto* s_rec = app.add_subcommand("recurrence", "shortest return times r_eps per cell");
    add_common(s_rec, rc.common);
    add_graph_source(s_rec, rc.src, false);
    s_rec->add_option("--sample", rc.sample, "evaluate a random subset of cells");
    s_rec->add_option("--seed", rc.common.seed, "seed for --sample");

    MixingArgs mx;
    auto* s_mix = app.add_subcommand("mixing", "mixing times m_eps(delta)");
    add_common(s_mix, mx.common);
    add_graph_source(s_mix, mx.src, true);
    s_mix->add_option("--delta", mx.delta, "start ball radius")->required();
    s_mix->add_flag("--no-primitivity", mx.no_primitivity, "skip the primitivity exponent");

    EntropyArgs en;
    auto* s_ent = app.add_subcommand("entropy", "entropy lower bound from mixing times");
    add_common(s_ent, en.common);
    add_system(s_ent, en.system);
    add_policy(s_ent, en.policy);
    s_ent->add_option("--delta-ladder", en.delta_ladder, "delta values")->required();
    s_ent->add_option("--eps-ladder", en.eps_ladder, "eps values")->required();
    s_ent->add_option("--mode", en.mode, "outer | inner");
    s_ent->add_option("--cells", en.cells, "fixed cell count (default: resolution policy per eps)");
    s_ent->add_option("--d", en.d, "dimension factor (default: known box dimension or a covering-number fit)");
    s_ent->add_option("--csv", en.csv, "write the (delta, eps, m, h_bound) grid as CSV");
    s_ent->add_flag("--path-growth", en.path_growth, "also report the walk-count growth rate at the finest eps");

    OracleArgs orc;
    auto* s_orc = app.add_subcommand("oracle", "closed-form values");
    s_orc->require_subcommand(1);
    std::vector<std::pair<std::string, CLI::App*>> oracle_subs;
    const std::vector<std::pair<const char*, const char*>> oracle_kinds{
        {"rotation", "r_eps and m_eps of a circle rotation, best approximations"},
        {"doubling", "r_eps and m_eps(delta) of the doubling map"},
        {"cf", "continued fraction expansion and convergents"},
        {"odometer", "period k_eps of the adding machine"},
        {"subshift", "irreducibility, period and primitivity of a 0/1 matrix; r_eps at a word"},
    };
    for (const auto& [name, about] : oracle_kinds) {
        auto* sub = s_orc->add_subcommand(name, about);
        add_common(sub, orc.common);
        const std::string n = name;
        if (n == "rotation" || n == "cf") sub->add_option("--alpha", orc.alpha, "p/q, decimal, golden, sqrt2-1, pi-3, e-2");
        if (n != "cf") sub->add_option("--eps", orc.eps, "jump size");
        if (n == "doubling") sub->add_option("--delta", orc.delta, "start ball radius");
        if (n == "cf") sub->add_option("--terms", orc.terms, "number of partial quotients after a_0");
        if (n == "rotation") sub->add_option("--qmax", orc.qmax, "largest denominator for best approximations");
        if (n == "subshift") {
            sub->add_option("--matrix", orc.matrix, "rows separated by ';', e.g. 11;10")->required();
            sub->add_option("--word", orc.word, "allowed word a_0 a_1 ... as digits");
        }
        oracle_subs.emplace_back(n, sub);
    }

    ReproduceArgs rp;
    auto* s_rep = app.add_subcommand("reproduce", "run a named scenario and compare estimates with oracles");
    add_common(s_rep, rp.common);
    std::string ids_help;
    for (const auto& s : scenario_ids()) ids_help += s + " | ";
    s_rep->add_option("scenario", rp.id, ids_help + "all")->required();
    s_rep->add_option("--eps", rp.eps, "eps value or ladder");
    s_rep->add_option("--alpha", rp.alpha, "rotation angle");
    s_rep->add_option("--cells", rp.cells, "cell count");
    s_rep->add_option("--L", rp.length, "truncation length");
    s_rep->add_option("--gap", rp.gap, "two-circle gap");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = e.get_exit_code();
        if (code == 0) {
            out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(e.what()) + "\n" : app.help());
            // CLI11 reports --help on the subcommand that received it.
            return 0;
        }
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }

    try {
        auto set_jobs = [](const Common& c) {
            if (c.jobs) set_default_jobs(c.jobs);
        };
        if (s_build->parsed()) return set_jobs(bg.common), cmd_build_graph(bg, s_build, out);
        if (s_struct->parsed()) return set_jobs(st.common), cmd_structure(st, s_struct, out);
        if (s_rec->parsed()) return set_jobs(rc.common), cmd_recurrence(rc, s_rec, out);
        if (s_mix->parsed()) return set_jobs(mx.common), cmd_mixing(mx, s_mix, out);
        if (s_ent->parsed()) return set_jobs(en.common), cmd_entropy(en, s_ent, out);
        for (const auto& [name, sub] : oracle_subs)
            if (sub->parsed()) return set_jobs(orc.common), cmd_oracle(name, orc, sub, out);
        if (s_rep->parsed()) return set_jobs(rp.common), cmd_reproduce(rp, s_rep, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (!e.hint().empty()) err << "hint: " << e.hint() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace chainscope::cli
