#include "chainscope/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "chainscope/error.hpp"
#include "chainscope/precision.hpp"

namespace chainscope {
namespace {

void escape(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

void dump_into(std::string& out, const Json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::null: out += "null"; break;
        case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
        case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out += buf;
            }
            break;
        }
        case Json::value_t::string: escape(out, j.get<std::string>()); break;
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            // Arrays of scalars stay on one line to keep per-vertex arrays compact.
            bool scalars = true;
            for (const auto& e : j) scalars = scalars && !e.is_structured();
            if (scalars) {
                out += '[';
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    dump_into(out, e, depth + 1);
                    first = false;
                }
                out += ']';
                break;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ",\n";
                out += pad;
                dump_into(out, e, depth + 1);
                first = false;
            }
            out += "\n" + close_pad + "]";
            break;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                out += pad;
                escape(out, it.key());
                out += ": ";
                dump_into(out, it.value(), depth + 1);
                first = false;
            }
            out += "\n" + close_pad + "}";
            break;
        }
        default: out += "null";
    }
}

}  // namespace

std::string dump_json(const Json& j) {
    std::string out;
    dump_into(out, j, 0);
    out += '\n';
    return out;
}

std::vector<double> parse_ladder(const std::string& text) {
    const auto bad = [&]() -> std::vector<double> {
        invalid("cannot parse ladder '" + text + "'", "use start:end:geometric:count, start:end:linear:count, or a,b,c");
    };
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    if (text.find(':') != std::string::npos) {
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 4) return bad();
        const double start = to_double(parse_rational(parts[0]));
        const double end = to_double(parse_rational(parts[1]));
        long count = 0;
        try {
            count = std::stol(parts[3]);
        } catch (...) {
            return bad();
        }
        if (count < 1) return bad();
        std::vector<double> out;
        if (count == 1) return {start};
        for (long i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(count - 1);
            if (parts[2] == "geometric") {
                if (!(start > 0) || !(end > 0)) invalid("geometric ladders need positive ends");
                out.push_back(i == count - 1 ? end : start * std::pow(end / start, t));
            } else if (parts[2] == "linear") {
                out.push_back(i == count - 1 ? end : start + (end - start) * t);
            } else {
                return bad();
            }
        }
        return out;
    }
    std::vector<double> out;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) return bad();
        out.push_back(to_double(parse_rational(item)));
    }
    if (out.empty()) return bad();
    return out;
}

std::string format_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < width.size(); ++c) {
            const std::string cell = c < cells.size() ? cells[c] : "";
            out += cell;
            if (c + 1 < width.size()) out += std::string(width[c] - cell.size() + 2, ' ');
        }
        out += '\n';
    };
    line(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.push_back(std::string(w, '-'));
    line(rule);
    for (const auto& r : rows) line(r);
    return out;
}

std::string fmt_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

Json RunManifest::to_json() const {
    Json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    Json sys = Json::object();
    for (const auto& [k, v] : system) sys[k] = v;
    if (!system.empty()) {
        j["system"] = sys;
        j["system_description"] = system_description;
    }
    Json params = Json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    j["parameters"] = params;
    Json lad = Json::object();
    for (const auto& [k, v] : ladders) lad[k] = v;
    j["ladders"] = lad;
    Json pol = Json::object();
    if (rho_fraction) pol["rho_over_eps_max"] = *rho_fraction;
    if (max_cells) pol["max_cells"] = *max_cells;
    j["resolution_policy"] = pol;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    if (timings) {
        Json t = Json::object();
        for (const auto& [k, v] : stage_seconds) t[k] = v;
        j["wall_seconds"] = t;
    }
    return j;
}

}  // namespace chainscope
