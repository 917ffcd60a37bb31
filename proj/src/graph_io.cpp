#include "chainscope/graph_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chainscope/error.hpp"

namespace chainscope {
namespace {

constexpr char kBinaryMagic[8] = {'C', 'S', 'G', 'R', 'A', 'P', 'H', '1'};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void bad_file(const std::string& what) { invalid("malformed file: " + what); }

void put_varint(std::ostream& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.put(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    out.put(static_cast<char>(v));
}

std::uint64_t get_varint(std::istream& in) {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        const int ch = in.get();
        if (ch == EOF) bad_file("truncated varint");
        v |= static_cast<std::uint64_t>(ch & 0x7f) << shift;
        if (!(ch & 0x80)) return v;
    }
    bad_file("varint too long");
}

void put_double(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double get_double(std::istream& in) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        const int ch = in.get();
        if (ch == EOF) bad_file("truncated double");
        bits |= static_cast<std::uint64_t>(ch & 0xff) << (8 * i);
    }
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

struct Header {
    std::size_t n = 0;
    ChainGraph meta;
};

void parse_header_fields(const std::string& line, Header& h) {
    std::istringstream ss(line);
    std::string key;
    bool have_n = false;
    while (ss >> key) {
        std::string value;
        if (!(ss >> value)) bad_file("header key '" + key + "' without value");
        if (key == "N") {
            h.n = std::stoull(value);
            have_n = true;
        } else if (key == "eps") h.meta.eps = std::stod(value);
        else if (key == "rho") h.meta.rho = std::stod(value);
        else if (key == "mode") h.meta.mode = parse_mode(value);
        else if (key == "lipschitz") h.meta.lipschitz_c = std::stod(value);
        else if (key == "exact") h.meta.exact = value == "1";
        else if (key == "eps_lo") h.meta.eps_lo = std::stod(value);
        else if (key == "eps_hi") h.meta.eps_hi = std::stod(value);
        else bad_file("unknown header key '" + key + "'");
    }
    if (!have_n) bad_file("header without N");
}

ChainGraph with_meta(ChainGraph g, const ChainGraph& meta) {
    g.mode = meta.mode;
    g.eps = meta.eps;
    g.rho = meta.rho;
    g.lipschitz_c = meta.lipschitz_c;
    g.exact = meta.exact;
    g.eps_lo = meta.eps_lo;
    g.eps_hi = meta.eps_hi;
    g.system_description = meta.system_description;
    return g;
}

}  // namespace

void write_graph_text(std::ostream& out, const ChainGraph& g) {
    out << "chainscope-adj 1\n";
    out << "N " << g.n << " eps " << fmt(g.eps) << " rho " << fmt(g.rho) << " mode " << to_string(g.mode)
        << " lipschitz " << fmt(g.lipschitz_c) << " exact " << (g.exact ? 1 : 0) << " eps_lo " << fmt(g.eps_lo)
        << " eps_hi " << fmt(g.eps_hi) << "\n";
    out << "system " << g.system_description << "\n";
    for (std::size_t v = 0; v < g.n; ++v) {
        bool first = true;
        for (auto t : g.successors(v)) {
            if (!first) out << ' ';
            out << t;
            first = false;
        }
        out << '\n';
    }
}

ChainGraph read_graph_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "chainscope-adj 1") bad_file("missing 'chainscope-adj 1' line");
    Header h;
    if (!std::getline(in, line)) bad_file("missing header");
    parse_header_fields(line, h);
    if (!std::getline(in, line) || line.rfind("system", 0) != 0) bad_file("missing system line");
    h.meta.system_description = line.size() > 7 ? line.substr(7) : "";
    std::vector<std::vector<std::uint32_t>> lists(h.n);
    for (std::size_t v = 0; v < h.n; ++v) {
        if (!std::getline(in, line)) bad_file("expected " + std::to_string(h.n) + " successor lines");
        std::istringstream ss(line);
        long long t;
        while (ss >> t) {
            if (t < 0 || static_cast<std::size_t>(t) >= h.n) bad_file("successor index out of range");
            lists[v].push_back(static_cast<std::uint32_t>(t));
        }
        if (!ss.eof()) bad_file("non-numeric successor on line for vertex " + std::to_string(v));
    }
    return with_meta(ChainGraph::from_lists(lists), h.meta);
}

void write_graph_binary(std::ostream& out, const ChainGraph& g) {
    out.write(kBinaryMagic, sizeof kBinaryMagic);
    put_varint(out, g.n);
    put_double(out, g.eps);
    put_double(out, g.rho);
    put_double(out, g.lipschitz_c);
    put_double(out, g.eps_lo);
    put_double(out, g.eps_hi);
    out.put(g.mode == GraphMode::Outer ? 0 : 1);
    out.put(g.exact ? 1 : 0);
    put_varint(out, g.system_description.size());
    out.write(g.system_description.data(), static_cast<std::streamsize>(g.system_description.size()));
    for (std::size_t v = 0; v < g.n; ++v) {
        const auto s = g.successors(v);
        put_varint(out, s.size());
        std::uint64_t prev = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            put_varint(out, i == 0 ? s[i] : s[i] - prev);
            prev = s[i];
        }
    }
}

ChainGraph read_graph_binary(std::istream& in) {
    char magic[sizeof kBinaryMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kBinaryMagic, sizeof magic) != 0)
        bad_file("missing binary graph magic");
    ChainGraph meta;
    const std::uint64_t n = get_varint(in);
    meta.eps = get_double(in);
    meta.rho = get_double(in);
    meta.lipschitz_c = get_double(in);
    meta.eps_lo = get_double(in);
    meta.eps_hi = get_double(in);
    meta.mode = in.get() == 0 ? GraphMode::Outer : GraphMode::Inner;
    meta.exact = in.get() == 1;
    const std::uint64_t len = get_varint(in);
    if (len > (1u << 20)) bad_file("system description too long");
    meta.system_description.resize(len);
    in.read(meta.system_description.data(), static_cast<std::streamsize>(len));
    std::vector<std::vector<std::uint32_t>> lists(n);
    for (std::uint64_t v = 0; v < n; ++v) {
        const std::uint64_t deg = get_varint(in);
        if (deg > n) bad_file("degree larger than vertex count");
        std::uint64_t cur = 0;
        for (std::uint64_t i = 0; i < deg; ++i) {
            const std::uint64_t d = get_varint(in);
            cur = i == 0 ? d : cur + d;
            if (cur >= n) bad_file("successor index out of range");
            lists[v].push_back(static_cast<std::uint32_t>(cur));
        }
    }
    return with_meta(ChainGraph::from_lists(lists), meta);
}

void save_graph(const std::string& path, const ChainGraph& g) {
    const bool binary = path.ends_with(".bin") || path.ends_with(".adjb");
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) io_failure("cannot write '" + path + "'");
    if (binary) write_graph_binary(out, g);
    else write_graph_text(out, g);
}

ChainGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_failure("cannot read graph file '" + path + "'");
    char first = 0;
    in.get(first);
    in.unget();
    if (first == kBinaryMagic[0]) return read_graph_binary(in);
    return read_graph_text(in);
}

void write_cover(std::ostream& out, const Cover& cover, const SystemSpec& system) {
    out << "chainscope-cov 1\n";
    out << "cells " << cover.size() << " rho " << fmt(cover.rho) << " exact " << (cover.exact ? 1 : 0) << "\n";
    for (const auto& [k, v] : system_to_config(system)) out << "config " << k << " = " << v << "\n";
    out << "centers\n";
    for (std::size_t i = 0; i < cover.size(); ++i) {
        bool first = true;
        for (const auto& col : cover.coords) {
            if (!first) out << ' ';
            out << fmt(col[i]);
            first = false;
        }
        for (const auto& col : cover.symbols) {
            if (!first) out << ' ';
            out << static_cast<int>(col[i]);
            first = false;
        }
        out << '\n';
    }
}

std::pair<SystemSpec, Cover> read_cover(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "chainscope-cov 1") bad_file("missing 'chainscope-cov 1' line");
    if (!std::getline(in, line)) bad_file("missing cells line");
    std::istringstream hs(line);
    std::string k1, k2, k3;
    std::size_t cells = 0;
    double rho = 0;
    int exact = 0;
    if (!(hs >> k1 >> cells >> k2 >> rho >> k3 >> exact) || k1 != "cells" || k2 != "rho" || k3 != "exact")
        bad_file("bad cells line");
    std::string config_text;
    while (std::getline(in, line) && line != "centers") {
        if (line.rfind("config ", 0) != 0) bad_file("unexpected line '" + line + "'");
        config_text += line.substr(7) + "\n";
    }
    if (line != "centers") bad_file("missing centers section");
    SystemSpec system = system_from_config(parse_config_text(config_text));
    Cover cover = build_cover(system, cells);
    // The cover is a function of (system, cells); the stored centers must agree.
    for (std::size_t i = 0; i < cells; ++i) {
        if (!std::getline(in, line)) bad_file("expected " + std::to_string(cells) + " center lines");
        std::istringstream ss(line);
        for (const auto& col : cover.coords) {
            double v;
            if (!(ss >> v) || v != col[i]) bad_file("center " + std::to_string(i) + " does not match the system's cover");
        }
        for (const auto& col : cover.symbols) {
            int v;
            if (!(ss >> v) || v != col[i]) bad_file("center " + std::to_string(i) + " does not match the system's cover");
        }
    }
    if (cover.rho != rho) bad_file("rho does not match the system's cover");
    return {std::move(system), std::move(cover)};
}

void save_cover(const std::string& path, const Cover& cover, const SystemSpec& system) {
    std::ofstream out(path);
    if (!out) io_failure("cannot write '" + path + "'");
    write_cover(out, cover, system);
}

std::pair<SystemSpec, Cover> load_cover(const std::string& path) {
    std::ifstream in(path);
    if (!in) io_failure("cannot read cover file '" + path + "'");
    return read_cover(in);
}

}  // namespace chainscope
