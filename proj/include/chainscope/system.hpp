#pragma once

// The zoo of maps under analysis: each SystemSpec bundles a map, its metric
// space and the constants the bounds need (Lipschitz constant c, diameter D,
// box dimensions when known).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "chainscope/precision.hpp"

namespace chainscope {

enum class SystemKind { CircleRotation, Doubling, IntervalMap, FiniteShift, Odometer, Product, Power, TwoCircle };

std::string to_string(SystemKind kind);

// Real coordinates (circle values in [0,1), interval values in [0,1]) followed
// by symbols (shift/odometer words, the circle index of the two-circle space).
// Product points concatenate the factors' coordinates and symbols.
struct Point {
    std::vector<double> x;
    std::vector<std::uint8_t> s;

    bool operator==(const Point&) const = default;
};

struct SystemSpec;
using SystemPtr = std::shared_ptr<const SystemSpec>;

struct RotationParams {
    RealInterval alpha;
    double alpha_value = 0;  // midpoint, used for evaluation
};

struct DoublingParams {};

enum class IntervalFamily { Square, Tent, Logistic, PiecewiseLinear };

struct IntervalMapParams {
    IntervalFamily family = IntervalFamily::Square;
    double r = 4;                                    // logistic parameter
    std::vector<std::pair<double, double>> nodes;    // piecewise-linear graph, x from 0 to 1
};

// Shift on the periodic words of length L allowed by `matrix` (including the
// wrap-around transition), acting by cyclic rotation.
struct FiniteShiftParams {
    std::vector<std::vector<std::uint8_t>> matrix;
    int length = 12;
};

// Adding machine truncated to L binary digits, least significant first.
struct OdometerParams {
    int length = 12;
};

struct ProductParams {
    SystemPtr a, b;
};

struct PowerParams {
    SystemPtr base;
    int k = 1;
};

// Two unit circles at distance `gap`; (b, x) -> (1 - b, 2x mod 1).
struct TwoCircleParams {
    double gap = 0.25;
};

struct SystemSpec {
    SystemKind kind = SystemKind::Doubling;
    std::variant<RotationParams, DoublingParams, IntervalMapParams, FiniteShiftParams, OdometerParams, ProductParams,
                 PowerParams, TwoCircleParams>
        params;
    double lipschitz_c = 1;
    double diameter_D = 0.5;
    std::optional<double> boxdim_lower;
    std::optional<double> boxdim_upper;

    std::size_t real_dims = 1;
    std::size_t symbol_dims = 0;

    // True for finite symbolic truncations whose transition graph is computed
    // exactly (one cell per point).
    bool symbolic() const;

    // Canonical one-line description, e.g. "product(rotation(alpha=1/3),doubling)".
    std::string describe() const;

    template <typename T>
    const T& as() const {
        return std::get<T>(params);
    }
};

SystemSpec make_rotation(const RealInterval& alpha);
SystemSpec make_doubling();
SystemSpec make_square_map();
SystemSpec make_tent_map();
SystemSpec make_logistic_map(double r);
SystemSpec make_piecewise_linear_map(std::vector<std::pair<double, double>> nodes);
SystemSpec make_finite_shift(std::vector<std::vector<std::uint8_t>> matrix, int length);
SystemSpec make_odometer(int length);
SystemSpec make_two_circle(double gap);
SystemSpec make_product(const SystemSpec& a, const SystemSpec& b);
SystemSpec make_power(const SystemSpec& a, int k);

// Returns f(p), canonicalized (circle coordinates in [0,1)).
Point evaluate(const SystemSpec& system, const Point& p);
double distance(const SystemSpec& system, const Point& p, const Point& q);
bool in_space(const SystemSpec& system, const Point& p);
Point random_point(const SystemSpec& system, std::mt19937_64& rng);

// Wrap a real into [0, 1).
double wrap_unit(double x);
double arc_distance(double a, double b);

// Word helpers for the symbolic truncations: distance sum_i [a_i != b_i] / 2^(i+1).
double word_distance(const std::uint8_t* a, const std::uint8_t* b, std::size_t length);

// Allowed periodic words of a finite shift, in lexicographic order.
std::vector<std::vector<std::uint8_t>> shift_words(const FiniteShiftParams& p);

// Key/value description of a system (see system_config.cpp for the schema).
using ConfigMap = std::map<std::string, std::string>;
SystemSpec system_from_config(const ConfigMap& config, const std::string& prefix = "");
ConfigMap system_to_config(const SystemSpec& system, const std::string& prefix = "");
// Parses "key = value" lines; '#' starts a comment.
ConfigMap parse_config_text(const std::string& text);
ConfigMap read_config_file(const std::string& path);

}  // namespace chainscope
