#include "chainscope/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chainscope/error.hpp"

namespace chainscope {
namespace {


std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void evaluate_into(const SystemSpec& sys, const double* x, const std::uint8_t* s, double* ox, std::uint8_t* os);
double distance_at(const SystemSpec& sys, const double* x1, const std::uint8_t* s1, const double* x2,
                   const std::uint8_t* s2);

double interval_map(const IntervalMapParams& p, double x) {
    switch (p.family) {
        case IntervalFamily::Square: return x * x;
        case IntervalFamily::Tent: return x < 0.5 ? 2 * x : 2 - 2 * x;
        case IntervalFamily::Logistic: return p.r * x * (1 - x);
        case IntervalFamily::PiecewiseLinear: {
            const auto& n = p.nodes;
            auto it = std::upper_bound(n.begin(), n.end(), x,
                                       [](double v, const std::pair<double, double>& node) { return v < node.first; });
            if (it == n.begin()) return n.front().second;
            if (it == n.end()) return n.back().second;
            const auto& [x1, y1] = *it;
            const auto& [x0, y0] = *(it - 1);
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return x;
}

void evaluate_into(const SystemSpec& sys, const double* x, const std::uint8_t* s, double* ox, std::uint8_t* os) {
    switch (sys.kind) {
        case SystemKind::CircleRotation: ox[0] = wrap_unit(x[0] + sys.as<RotationParams>().alpha_value); return;
        case SystemKind::Doubling: ox[0] = wrap_unit(2 * x[0]); return;
        case SystemKind::IntervalMap:
            ox[0] = std::clamp(interval_map(sys.as<IntervalMapParams>(), x[0]), 0.0, 1.0);
            return;
        case SystemKind::FiniteShift: {
            const std::size_t L = sys.symbol_dims;
            const std::uint8_t first = s[0];
            for (std::size_t i = 0; i + 1 < L; ++i) os[i] = s[i + 1];
            os[L - 1] = first;
            return;
        }
        case SystemKind::Odometer: {
            const std::size_t L = sys.symbol_dims;
            std::size_t i = 0;
            for (; i < L && s[i] == 1; ++i) os[i] = 0;
            if (i < L) os[i] = 1;
            for (++i; i < L; ++i) os[i] = s[i];
            return;
        }
        case SystemKind::TwoCircle:
            ox[0] = wrap_unit(2 * x[0]);
            os[0] = static_cast<std::uint8_t>(1 - s[0]);
            return;
        case SystemKind::Product: {
            const auto& p = sys.as<ProductParams>();
            evaluate_into(*p.a, x, s, ox, os);
            evaluate_into(*p.b, x + p.a->real_dims, s + p.a->symbol_dims, ox + p.a->real_dims,
                          os + p.a->symbol_dims);
            return;
        }
        case SystemKind::Power: {
            const auto& p = sys.as<PowerParams>();
            std::vector<double> bx(x, x + sys.real_dims), tx(sys.real_dims);
            std::vector<std::uint8_t> bs(s, s + sys.symbol_dims), ts(sys.symbol_dims);
            for (int i = 0; i < p.k; ++i) {
                evaluate_into(*p.base, bx.data(), bs.data(), tx.data(), ts.data());
                std::swap(bx, tx);
                std::swap(bs, ts);
            }
            std::copy(bx.begin(), bx.end(), ox);
            std::copy(bs.begin(), bs.end(), os);
            return;
        }
    }
}

double distance_at(const SystemSpec& sys, const double* x1, const std::uint8_t* s1, const double* x2,
                   const std::uint8_t* s2) {
    switch (sys.kind) {
        case SystemKind::CircleRotation:
        case SystemKind::Doubling: return arc_distance(x1[0], x2[0]);
        case SystemKind::IntervalMap: return std::fabs(x1[0] - x2[0]);
        case SystemKind::FiniteShift:
        case SystemKind::Odometer: return word_distance(s1, s2, sys.symbol_dims);
        case SystemKind::TwoCircle:
            return arc_distance(x1[0], x2[0]) + (s1[0] != s2[0] ? sys.as<TwoCircleParams>().gap : 0.0);
        case SystemKind::Product: {
            const auto& p = sys.as<ProductParams>();
            const double da = distance_at(*p.a, x1, s1, x2, s2);
            const double db = distance_at(*p.b, x1 + p.a->real_dims, s1 + p.a->symbol_dims, x2 + p.a->real_dims,
                                          s2 + p.a->symbol_dims);
            return std::max(da, db);
        }
        case SystemKind::Power: return distance_at(*sys.as<PowerParams>().base, x1, s1, x2, s2);
    }
    return 0;
}

void check_word_length(int length) {
    if (length < 1 || length > 24) invalid("word length L must be in [1, 24], got " + std::to_string(length));
}

}  // namespace

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::CircleRotation: return "rotation";
        case SystemKind::Doubling: return "doubling";
        case SystemKind::IntervalMap: return "interval-map";
        case SystemKind::FiniteShift: return "finite-shift";
        case SystemKind::Odometer: return "odometer";
        case SystemKind::Product: return "product";
        case SystemKind::Power: return "power";
        case SystemKind::TwoCircle: return "two-circle";
    }
    return "?";
}

double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

double arc_distance(double a, double b) {
    const double t = std::fabs(a - b);
    return std::min(t, 1.0 - t);
}

double word_distance(const std::uint8_t* a, const std::uint8_t* b, std::size_t length) {
    double d = 0, w = 0.5;
    for (std::size_t i = 0; i < length; ++i, w *= 0.5)
        if (a[i] != b[i]) d += w;
    return d;
}

bool SystemSpec::symbolic() const {
    switch (kind) {
        case SystemKind::FiniteShift:
        case SystemKind::Odometer: return true;
        case SystemKind::Product: {
            const auto& p = as<ProductParams>();
            return p.a->symbolic() && p.b->symbolic();
        }
        case SystemKind::Power: return as<PowerParams>().base->symbolic();
        default: return false;
    }
}

std::string SystemSpec::describe() const {
    switch (kind) {
        case SystemKind::CircleRotation: return "rotation(alpha=" + as<RotationParams>().alpha.label + ")";
        case SystemKind::Doubling: return "doubling";
        case SystemKind::IntervalMap: {
            const auto& p = as<IntervalMapParams>();
            switch (p.family) {
                case IntervalFamily::Square: return "interval-map(square)";
                case IntervalFamily::Tent: return "interval-map(tent)";
                case IntervalFamily::Logistic: return "interval-map(logistic,r=" + format_double(p.r) + ")";
                case IntervalFamily::PiecewiseLinear: {
                    std::string s = "interval-map(piecewise";
                    for (const auto& [x, y] : p.nodes) s += "," + format_double(x) + ":" + format_double(y);
                    return s + ")";
                }
            }
            return "interval-map";
        }
        case SystemKind::FiniteShift: {
            const auto& p = as<FiniteShiftParams>();
            std::string m;
            for (std::size_t i = 0; i < p.matrix.size(); ++i) {
                if (i) m += ";";
                for (auto v : p.matrix[i]) m += static_cast<char>('0' + v);
            }
            return "finite-shift(L=" + std::to_string(p.length) + ",matrix=" + m + ")";
        }
        case SystemKind::Odometer: return "odometer(L=" + std::to_string(as<OdometerParams>().length) + ")";
        case SystemKind::TwoCircle: return "two-circle(gap=" + format_double(as<TwoCircleParams>().gap) + ")";
        case SystemKind::Product: {
            const auto& p = as<ProductParams>();
            return "product(" + p.a->describe() + "," + p.b->describe() + ")";
        }
        case SystemKind::Power: {
            const auto& p = as<PowerParams>();
            return "power(" + p.base->describe() + ",k=" + std::to_string(p.k) + ")";
        }
    }
    return "?";
}

SystemSpec make_rotation(const RealInterval& alpha) {
    if (alpha.lo < 0 || alpha.hi >= 1) invalid("rotation angle must lie in [0, 1)", "reduce alpha mod 1");
    SystemSpec s;
    s.kind = SystemKind::CircleRotation;
    RotationParams p;
    p.alpha = alpha;
    p.alpha_value = alpha.to_double();
    s.params = p;
    s.lipschitz_c = 1;
    s.diameter_D = 0.5;
    s.boxdim_lower = s.boxdim_upper = 1.0;
    return s;
}

SystemSpec make_doubling() {
    SystemSpec s;
    s.kind = SystemKind::Doubling;
    s.params = DoublingParams{};
    s.lipschitz_c = 2;
    s.diameter_D = 0.5;
    s.boxdim_lower = s.boxdim_upper = 1.0;
    return s;
}

namespace {
SystemSpec interval_system(IntervalMapParams p, double c) {
    SystemSpec s;
    s.kind = SystemKind::IntervalMap;
    s.params = std::move(p);
    s.lipschitz_c = c;
    s.diameter_D = 1;
    s.boxdim_lower = s.boxdim_upper = 1.0;
    return s;
}
}  // namespace

SystemSpec make_square_map() { return interval_system({IntervalFamily::Square, 0, {}}, 2); }

SystemSpec make_tent_map() { return interval_system({IntervalFamily::Tent, 0, {}}, 2); }

SystemSpec make_logistic_map(double r) {
    if (!(r > 0 && r <= 4)) invalid("logistic parameter r must lie in (0, 4]");
    // c >= 1 is required by the mixing lower bound; r < 1 maps are contractions
    return interval_system({IntervalFamily::Logistic, r, {}}, std::max(r, 1.0));
}

SystemSpec make_piecewise_linear_map(std::vector<std::pair<double, double>> nodes) {
    if (nodes.size() < 2) invalid("piecewise-linear map needs at least two nodes");
    if (nodes.front().first != 0.0 || nodes.back().first != 1.0)
        invalid("piecewise-linear nodes must start at x=0 and end at x=1");
    double c = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].second < 0 || nodes[i].second > 1) invalid("piecewise-linear values must lie in [0, 1]");
        if (i > 0) {
            const double dx = nodes[i].first - nodes[i - 1].first;
            if (!(dx > 0)) invalid("piecewise-linear node x values must be strictly increasing");
            c = std::max(c, std::fabs(nodes[i].second - nodes[i - 1].second) / dx);
        }
    }
    return interval_system({IntervalFamily::PiecewiseLinear, 0, std::move(nodes)}, std::max(c, 1.0));
}

SystemSpec make_finite_shift(std::vector<std::vector<std::uint8_t>> matrix, int length) {
    check_word_length(length);
    const std::size_t m = matrix.size();
    if (m == 0 || m > 255) invalid("shift transition matrix must have between 1 and 255 symbols");
    for (const auto& row : matrix) {
        if (row.size() != m) invalid("shift transition matrix must be square");
        for (auto v : row)
            if (v > 1) invalid("shift transition matrix entries must be 0 or 1");
    }
    SystemSpec s;
    s.kind = SystemKind::FiniteShift;
    s.params = FiniteShiftParams{std::move(matrix), length};
    s.lipschitz_c = 2;
    s.diameter_D = 1 - std::ldexp(1.0, -length);
    s.real_dims = 0;
    s.symbol_dims = static_cast<std::size_t>(length);
    if (shift_words(s.as<FiniteShiftParams>()).size() < 2)
        invalid("finite shift has fewer than two allowed periodic words of length " + std::to_string(length));
    return s;
}

SystemSpec make_odometer(int length) {
    check_word_length(length);
    SystemSpec s;
    s.kind = SystemKind::Odometer;
    s.params = OdometerParams{length};
    s.lipschitz_c = 2;
    s.diameter_D = 1 - std::ldexp(1.0, -length);
    s.real_dims = 0;
    s.symbol_dims = static_cast<std::size_t>(length);
    return s;
}

SystemSpec make_two_circle(double gap) {
    if (!(gap > 0)) invalid("two-circle gap must be positive");
    SystemSpec s;
    s.kind = SystemKind::TwoCircle;
    s.params = TwoCircleParams{gap};
    s.lipschitz_c = 2;
    s.diameter_D = gap + 0.5;
    s.boxdim_lower = s.boxdim_upper = 1.0;
    s.real_dims = 1;
    s.symbol_dims = 1;
    return s;
}

SystemSpec make_product(const SystemSpec& a, const SystemSpec& b) {
    SystemSpec s;
    s.kind = SystemKind::Product;
    s.params = ProductParams{std::make_shared<const SystemSpec>(a), std::make_shared<const SystemSpec>(b)};
    s.lipschitz_c = std::max(a.lipschitz_c, b.lipschitz_c);
    s.diameter_D = std::max(a.diameter_D, b.diameter_D);
    if (a.boxdim_lower && b.boxdim_lower) s.boxdim_lower = *a.boxdim_lower + *b.boxdim_lower;
    if (a.boxdim_upper && b.boxdim_upper) s.boxdim_upper = *a.boxdim_upper + *b.boxdim_upper;
    s.real_dims = a.real_dims + b.real_dims;
    s.symbol_dims = a.symbol_dims + b.symbol_dims;
    return s;
}

SystemSpec make_power(const SystemSpec& a, int k) {
    if (k < 1) invalid("power exponent must be >= 1, got " + std::to_string(k));
    SystemSpec s;
    s.kind = SystemKind::Power;
    s.params = PowerParams{std::make_shared<const SystemSpec>(a), k};
    s.lipschitz_c = std::pow(a.lipschitz_c, k);
    s.diameter_D = a.diameter_D;
    s.boxdim_lower = a.boxdim_lower;
    s.boxdim_upper = a.boxdim_upper;
    s.real_dims = a.real_dims;
    s.symbol_dims = a.symbol_dims;
    return s;
}

Point evaluate(const SystemSpec& system, const Point& p) {
    if (p.x.size() != system.real_dims || p.s.size() != system.symbol_dims)
        invalid("point does not belong to " + system.describe());
    Point out;
    out.x.resize(system.real_dims);
    out.s.resize(system.symbol_dims);
    evaluate_into(system, p.x.data(), p.s.data(), out.x.data(), out.s.data());
    return out;
}

double distance(const SystemSpec& system, const Point& p, const Point& q) {
    if (p.x.size() != system.real_dims || p.s.size() != system.symbol_dims || q.x.size() != system.real_dims ||
        q.s.size() != system.symbol_dims)
        invalid("distance: point kinds do not match " + system.describe());
    return distance_at(system, p.x.data(), p.s.data(), q.x.data(), q.s.data());
}

bool in_space(const SystemSpec& system, const Point& p) {
    if (p.x.size() != system.real_dims || p.s.size() != system.symbol_dims) return false;
    switch (system.kind) {
        case SystemKind::CircleRotation:
        case SystemKind::Doubling: return p.x[0] >= 0 && p.x[0] < 1;
        case SystemKind::IntervalMap: return p.x[0] >= 0 && p.x[0] <= 1;
        case SystemKind::TwoCircle: return p.x[0] >= 0 && p.x[0] < 1 && p.s[0] <= 1;
        case SystemKind::Odometer:
            return std::all_of(p.s.begin(), p.s.end(), [](std::uint8_t v) { return v <= 1; });
        case SystemKind::FiniteShift: {
            const auto& m = system.as<FiniteShiftParams>().matrix;
            const std::size_t L = p.s.size();
            for (std::size_t i = 0; i < L; ++i) {
                if (p.s[i] >= m.size()) return false;
                if (!m[p.s[i]][p.s[(i + 1) % L]]) return false;
            }
            return true;
        }
        case SystemKind::Product: {
            const auto& pr = system.as<ProductParams>();
            Point a, b;
            a.x.assign(p.x.begin(), p.x.begin() + static_cast<long>(pr.a->real_dims));
            b.x.assign(p.x.begin() + static_cast<long>(pr.a->real_dims), p.x.end());
            a.s.assign(p.s.begin(), p.s.begin() + static_cast<long>(pr.a->symbol_dims));
            b.s.assign(p.s.begin() + static_cast<long>(pr.a->symbol_dims), p.s.end());
            return in_space(*pr.a, a) && in_space(*pr.b, b);
        }
        case SystemKind::Power: return in_space(*system.as<PowerParams>().base, p);
    }
    return false;
}

Point random_point(const SystemSpec& system, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Point p;
    switch (system.kind) {
        case SystemKind::CircleRotation:
        case SystemKind::Doubling:
        case SystemKind::IntervalMap: p.x = {unit(rng)}; return p;
        case SystemKind::TwoCircle:
            p.x = {unit(rng)};
            p.s = {static_cast<std::uint8_t>(rng() & 1u)};
            return p;
        case SystemKind::Odometer:
            for (std::size_t i = 0; i < system.symbol_dims; ++i) p.s.push_back(static_cast<std::uint8_t>(rng() & 1u));
            return p;
        case SystemKind::FiniteShift: {
            const auto words = shift_words(system.as<FiniteShiftParams>());
            p.s = words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
            return p;
        }
        case SystemKind::Product: {
            const auto& pr = system.as<ProductParams>();
            Point a = random_point(*pr.a, rng), b = random_point(*pr.b, rng);
            p.x = a.x;
            p.x.insert(p.x.end(), b.x.begin(), b.x.end());
            p.s = a.s;
            p.s.insert(p.s.end(), b.s.begin(), b.s.end());
            return p;
        }
        case SystemKind::Power: return random_point(*system.as<PowerParams>().base, rng);
    }
    return p;
}

std::vector<std::vector<std::uint8_t>> shift_words(const FiniteShiftParams& p) {
    const std::size_t m = p.matrix.size();
    const std::size_t L = static_cast<std::size_t>(p.length);
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> word(L, 0);
    // depth-first enumeration in lexicographic order with pruning on adjacent pairs
    std::vector<std::size_t> pos(L, 0);
    std::size_t depth = 0;
    pos[0] = 0;
    for (;;) {
        if (pos[depth] >= m) {
            if (depth == 0) break;
            --depth;
            ++pos[depth];
            continue;
        }
        word[depth] = static_cast<std::uint8_t>(pos[depth]);
        if (depth > 0 && !p.matrix[word[depth - 1]][word[depth]]) {
            ++pos[depth];
            continue;
        }
        if (depth + 1 == L) {
            if (p.matrix[word[L - 1]][word[0]]) out.push_back(word);
            ++pos[depth];
            continue;
        }
        ++depth;
        pos[depth] = 0;
    }
    return out;
}

}  // namespace chainscope
