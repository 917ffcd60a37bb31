// Key/value schema for systems. Keys (nested systems use "a."/"b." for
// product factors and "base." for powers):
//
//   system   rotation | doubling | interval-map | square | tent | logistic |
//            finite-shift | full-shift | golden-mean-shift | odometer |
//            two-circle | product | power
//   alpha    rotation angle: p/q, decimal, golden, sqrt2-1, pi-3, e-2
//   family   interval-map family: square | tent | logistic | piecewise
//   r        logistic parameter
//   nodes    piecewise-linear graph "x0:y0,x1:y1,..." from x=0 to x=1
//   matrix   shift transition matrix, rows separated by ';' ("11;10")
//   symbols  alphabet size for full-shift (default 2)
//   L        word length for shifts and the odometer (default 12)
//   gap      two-circle distance (default 0.25)
//   k        power exponent
//   D        diameter override (e.g. D=1 for the doubling map's other reading)

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chainscope/error.hpp"
#include "chainscope/system.hpp"

namespace chainscope {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::string* lookup(const ConfigMap& c, const std::string& prefix, const std::string& key) {
    auto it = c.find(prefix + key);
    return it == c.end() ? nullptr : &it->second;
}

double number(const ConfigMap& c, const std::string& prefix, const std::string& key, double fallback) {
    const std::string* v = lookup(c, prefix, key);
    if (!v) return fallback;
    return to_double(parse_rational(*v));
}

int integer(const ConfigMap& c, const std::string& prefix, const std::string& key, int fallback) {
    const std::string* v = lookup(c, prefix, key);
    if (!v) return fallback;
    const Rational r = parse_rational(*v);
    if (boost::multiprecision::denominator(r) != 1) invalid("'" + prefix + key + "' must be an integer");
    return boost::multiprecision::numerator(r).convert_to<int>();
}

std::vector<std::vector<std::uint8_t>> parse_matrix(const std::string& text) {
    std::vector<std::vector<std::uint8_t>> m;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<std::uint8_t> r;
        for (char ch : row) {
            if (ch == '0' || ch == '1') r.push_back(static_cast<std::uint8_t>(ch - '0'));
            else if (ch != ',' && ch != ' ') invalid("shift matrix entries must be 0 or 1: '" + text + "'");
        }
        m.push_back(std::move(r));
    }
    return m;
}

std::vector<std::pair<double, double>> parse_nodes(const std::string& text) {
    std::vector<std::pair<double, double>> nodes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) invalid("piecewise node '" + item + "' is not x:y");
        nodes.emplace_back(to_double(parse_rational(trim(item.substr(0, colon)))),
                           to_double(parse_rational(trim(item.substr(colon + 1)))));
    }
    return nodes;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SystemSpec system_from_config(const ConfigMap& c, const std::string& prefix) {
    const std::string* kind = lookup(c, prefix, "system");
    if (!kind) invalid("missing '" + prefix + "system' key", "set --system or a 'system =' line in the config");
    SystemSpec s;
    const std::string& k = *kind;
    if (k == "rotation" || k == "circle-rotation") {
        const std::string* alpha = lookup(c, prefix, "alpha");
        if (!alpha) invalid("rotation needs '" + prefix + "alpha'");
        s = make_rotation(parse_real(*alpha));
    } else if (k == "doubling") {
        s = make_doubling();
    } else if (k == "interval-map" || k == "square" || k == "tent" || k == "logistic") {
        std::string family = k == "interval-map" ? "square" : k;
        if (const std::string* f = lookup(c, prefix, "family")) family = *f;
        if (family == "square") s = make_square_map();
        else if (family == "tent") s = make_tent_map();
        else if (family == "logistic") s = make_logistic_map(number(c, prefix, "r", 4));
        else if (family == "piecewise") {
            const std::string* nodes = lookup(c, prefix, "nodes");
            if (!nodes) invalid("piecewise interval map needs '" + prefix + "nodes'");
            s = make_piecewise_linear_map(parse_nodes(*nodes));
        } else {
            invalid("unknown interval-map family '" + family + "'", "use square, tent, logistic or piecewise");
        }
    } else if (k == "finite-shift" || k == "full-shift" || k == "golden-mean-shift") {
        std::vector<std::vector<std::uint8_t>> m;
        if (k == "full-shift") {
            const int symbols = integer(c, prefix, "symbols", 2);
            if (symbols < 1 || symbols > 255) invalid("full-shift symbols must be in [1, 255]");
            m.assign(static_cast<std::size_t>(symbols), std::vector<std::uint8_t>(static_cast<std::size_t>(symbols), 1));
        } else if (k == "golden-mean-shift") {
            m = {{1, 1}, {1, 0}};
        } else {
            const std::string* text = lookup(c, prefix, "matrix");
            if (!text) invalid("finite-shift needs '" + prefix + "matrix'");
            m = parse_matrix(*text);
        }
        s = make_finite_shift(std::move(m), integer(c, prefix, "L", 12));
    } else if (k == "odometer") {
        s = make_odometer(integer(c, prefix, "L", 12));
    } else if (k == "two-circle") {
        s = make_two_circle(number(c, prefix, "gap", 0.25));
    } else if (k == "product") {
        s = make_product(system_from_config(c, prefix + "a."), system_from_config(c, prefix + "b."));
    } else if (k == "power") {
        s = make_power(system_from_config(c, prefix + "base."), integer(c, prefix, "k", 1));
    } else {
        invalid("unknown system '" + k + "'",
                "known systems: rotation, doubling, interval-map, square, tent, logistic, finite-shift, full-shift, "
                "golden-mean-shift, odometer, two-circle, product, power");
    }
    if (const std::string* d = lookup(c, prefix, "D")) {
        const double D = to_double(parse_rational(*d));
        if (!(D > 0)) invalid("diameter D must be positive");
        s.diameter_D = D;
    }
    return s;
}

ConfigMap system_to_config(const SystemSpec& s, const std::string& prefix) {
    ConfigMap c;
    c[prefix + "system"] = to_string(s.kind);
    switch (s.kind) {
        case SystemKind::CircleRotation: c[prefix + "alpha"] = s.as<RotationParams>().alpha.label; break;
        case SystemKind::Doubling: break;
        case SystemKind::IntervalMap: {
            const auto& p = s.as<IntervalMapParams>();
            switch (p.family) {
                case IntervalFamily::Square: c[prefix + "family"] = "square"; break;
                case IntervalFamily::Tent: c[prefix + "family"] = "tent"; break;
                case IntervalFamily::Logistic:
                    c[prefix + "family"] = "logistic";
                    c[prefix + "r"] = format_double(p.r);
                    break;
                case IntervalFamily::PiecewiseLinear: {
                    c[prefix + "family"] = "piecewise";
                    std::string nodes;
                    for (const auto& [x, y] : p.nodes) {
                        if (!nodes.empty()) nodes += ",";
                        nodes += format_double(x) + ":" + format_double(y);
                    }
                    c[prefix + "nodes"] = nodes;
                    break;
                }
            }
            break;
        }
        case SystemKind::FiniteShift: {
            const auto& p = s.as<FiniteShiftParams>();
            std::string m;
            for (std::size_t i = 0; i < p.matrix.size(); ++i) {
                if (i) m += ";";
                for (auto v : p.matrix[i]) m += static_cast<char>('0' + v);
            }
            c[prefix + "matrix"] = m;
            c[prefix + "L"] = std::to_string(p.length);
            break;
        }
        case SystemKind::Odometer: c[prefix + "L"] = std::to_string(s.as<OdometerParams>().length); break;
        case SystemKind::TwoCircle: c[prefix + "gap"] = format_double(s.as<TwoCircleParams>().gap); break;
        case SystemKind::Product: {
            const auto& p = s.as<ProductParams>();
            for (auto& kv : system_to_config(*p.a, prefix + "a.")) c.insert(kv);
            for (auto& kv : system_to_config(*p.b, prefix + "b.")) c.insert(kv);
            break;
        }
        case SystemKind::Power: {
            const auto& p = s.as<PowerParams>();
            c[prefix + "k"] = std::to_string(p.k);
            for (auto& kv : system_to_config(*p.base, prefix + "base.")) c.insert(kv);
            break;
        }
    }
    // Only record D when it differs from what the constructor would produce.
    if (s.kind != SystemKind::Product && s.kind != SystemKind::Power) {
        ConfigMap plain = c;
        const SystemSpec rebuilt = system_from_config(plain, prefix);
        if (rebuilt.diameter_D != s.diameter_D) c[prefix + "D"] = format_double(s.diameter_D);
    }
    return c;
}

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) invalid("config line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) invalid("config line " + std::to_string(lineno) + " has an empty key");
        c[key] = trim(line.substr(eq + 1));
    }
    return c;
}

ConfigMap read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) io_failure("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace chainscope
