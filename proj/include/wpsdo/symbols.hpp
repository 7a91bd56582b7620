#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wpsdo/grid.hpp"
#include "wpsdo/littlewood_paley.hpp"

namespace wpsdo {

// <x> = (1 + |x|^2)^{1/2}
double japanese_bracket(double r);
double japanese_bracket(const Point& x, int dim);

enum class SymbolKind { smooth_symbol, smooth_amplitude, rough_symbol, rough_amplitude };

std::string to_string(SymbolKind kind);
bool is_amplitude(SymbolKind kind);
bool is_rough(SymbolKind kind);

using AmplitudeFn = std::function<Complex(const Point& x, const Point& y, const Point& xi)>;
using PointFn = std::function<Complex(const Point&)>;

// Exact factorization a(x, xi) = spatial(x) * multiplier(xi); lets the
// operator run through the FFT instead of a direct lattice sum.
struct SeparableSymbol {
    PointFn spatial;
    PointFn multiplier;
};

/**
 * A symbol a(x, xi) or amplitude a(x, y, xi) with its declared class
 * parameters (order m, rho, delta). Symbols ignore the y argument.
 */
struct SymbolSpec {
    AmplitudeFn evaluator;
    double order = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    SymbolKind kind = SymbolKind::smooth_symbol;
    std::string label;
    std::optional<SeparableSymbol> separable;

    Complex operator()(const Point& x, const Point& y, const Point& xi) const { return evaluator(x, y, xi); }
    bool y_independent() const { return !is_amplitude(kind); }
};

struct PresetParams {
    int dim = 1;
    double m = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    // Transition half-width of the rough x-factor clamp(x / width, -1, 1).
    double width = 1.0;
    // oscillating_amplitude: Lipschitz x-factor (rough) or cos(x) (smooth).
    bool rough_x = true;
};

// Names: identity, bessel_order_m, rough_x_modulated, oscillating_amplitude.
// Throws std::invalid_argument for unknown names.
SymbolSpec preset_symbol(const std::string& name, const PresetParams& params);
std::vector<std::string> preset_symbol_names();

// Same evaluator, different declared class.
SymbolSpec with_class(SymbolSpec sym, double m, double rho, double delta);

// a_k = a * phi_k; throws std::out_of_range unless 0 <= k <= K.
SymbolSpec dyadic_piece(const SymbolSpec& sym, const LPFamily& fam, int k);

// a * phi_0(2^-K' xi) = sum_{k <= K'} a_k.
SymbolSpec truncated_symbol(const SymbolSpec& sym, const LPFamily& fam, int truncation);

struct DerivativeBound {
    int alpha = 0;  // xi
    int beta = 0;   // x
    int gamma = 0;  // y
    double sup = 0.0;
    std::vector<double> shell_sups;  // three largest dyadic shells, ascending |xi|
    bool bounded = false;
};

struct ClassMembershipReport {
    std::string label;
    double m = 0.0;
    double rho = 0.0;
    double delta = 0.0;
    std::vector<DerivativeBound> derivatives;

    bool member() const;
    const DerivativeBound& find(int alpha, int beta, int gamma) const;
};

// Normalized shell sups may vary by less than this factor across the three
// largest shells for a derivative to count as bounded.
inline constexpr double kShellVariationLimit = 2.0;

/**
 * Sampled check of |d_xi^a d_x^b d_y^c a| <= C <xi>^{m - rho a + delta (b + c)}
 * for a + b + c <= max_order. Differences are central, with the lattice step
 * pi/L in xi and dx in x and y. Rough kinds skip x-derivatives and symbols skip
 * y-derivatives. Sampling runs along the first axis.
 */
ClassMembershipReport estimate_class_membership(const SymbolSpec& sym, const PeriodicGrid& grid, int max_order = 3);

// sup_xi |d_xi^alpha a_k| * 2^{-k (m - rho alpha)} for k = 1..K_resolved.
std::vector<double> dyadic_derivative_profile(const SymbolSpec& sym, const LPFamily& fam, const PeriodicGrid& grid,
                                              int alpha);

}  // namespace wpsdo
