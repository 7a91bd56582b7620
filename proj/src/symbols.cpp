#include "wpsdo/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace wpsdo {

namespace {

using Stencil = std::vector<std::pair<int, double>>;

// Central difference weights at unit step; divide by h^order.
const Stencil& stencil(int order) {
    static const std::vector<Stencil> table = {
        {{0, 1.0}},
        {{1, 0.5}, {-1, -0.5}},
        {{1, 1.0}, {0, -2.0}, {-1, 1.0}},
        {{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}},
    };
    return table.at(static_cast<std::size_t>(order));
}

double rough_factor(double x, double width) { return 2.0 + std::clamp(x / width, -1.0, 1.0); }

Point shifted(Point p, double step) {
    p[0] += step;
    return p;
}

Complex mixed_difference(const SymbolSpec& sym, const Point& x, const Point& y, const Point& xi, int alpha, int beta,
                         int gamma, double h_xi, double h_x) {
    Complex acc = 0.0;
    for (const auto& [oa, ca] : stencil(alpha))
        for (const auto& [ob, cb] : stencil(beta))
            for (const auto& [oc, cc] : stencil(gamma))
                acc += ca * cb * cc * sym(shifted(x, ob * h_x), shifted(y, oc * h_x), shifted(xi, oa * h_xi));
    return acc / (std::pow(h_xi, alpha) * std::pow(h_x, beta + gamma));
}

std::vector<double> sample_positions(double half_span, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(-half_span + 2.0 * half_span * i / (count - 1));
    return out;
}

}  // namespace

double japanese_bracket(double r) { return std::sqrt(1.0 + r * r); }

double japanese_bracket(const Point& x, int dim) {
    const double r2 = dim == 1 ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1];
    return std::sqrt(1.0 + r2);
}

std::string to_string(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::smooth_symbol: return "smooth_symbol";
        case SymbolKind::smooth_amplitude: return "smooth_amplitude";
        case SymbolKind::rough_symbol: return "rough_symbol";
        case SymbolKind::rough_amplitude: return "rough_amplitude";
    }
    return "unknown";
}

bool is_amplitude(SymbolKind kind) {
    return kind == SymbolKind::smooth_amplitude || kind == SymbolKind::rough_amplitude;
}

bool is_rough(SymbolKind kind) { return kind == SymbolKind::rough_symbol || kind == SymbolKind::rough_amplitude; }

std::vector<std::string> preset_symbol_names() {
    return {"identity", "bessel_order_m", "rough_x_modulated", "oscillating_amplitude"};
}

SymbolSpec preset_symbol(const std::string& name, const PresetParams& params) {
    const int dim = params.dim;
    if (dim != 1 && dim != 2) throw std::invalid_argument("preset dimension must be 1 or 2");
    SymbolSpec sym;
    sym.label = name;
    if (name == "identity") {
        sym.evaluator = [](const Point&, const Point&, const Point&) { return Complex(1.0); };
        sym.order = 0.0;
        sym.rho = 1.0;
        sym.delta = 0.0;
        sym.kind = SymbolKind::smooth_symbol;
        sym.separable = SeparableSymbol{[](const Point&) { return Complex(1.0); },
                                        [](const Point&) { return Complex(1.0); }};
        return sym;
    }
    if (name == "bessel_order_m") {
        const double m = params.m;
        auto mult = [m, dim](const Point& xi) { return Complex(std::pow(japanese_bracket(xi, dim), m)); };
        sym.evaluator = [mult](const Point&, const Point&, const Point& xi) { return mult(xi); };
        sym.order = m;
        sym.rho = 1.0;
        sym.delta = 0.0;
        sym.kind = SymbolKind::smooth_symbol;
        sym.separable = SeparableSymbol{[](const Point&) { return Complex(1.0); }, mult};
        return sym;
    }
    if (name == "rough_x_modulated") {
        const double m = params.m;
        const double width = params.width;
        if (!(width > 0.0)) throw std::invalid_argument("rough_x_modulated needs width > 0");
        auto spatial = [width](const Point& x) { return Complex(rough_factor(x[0], width)); };
        auto mult = [m, dim](const Point& xi) { return Complex(std::pow(japanese_bracket(xi, dim), m)); };
        sym.evaluator = [spatial, mult](const Point& x, const Point&, const Point& xi) { return spatial(x) * mult(xi); };
        sym.order = m;
        sym.rho = 1.0;
        sym.delta = 0.0;
        sym.kind = SymbolKind::rough_symbol;
        sym.separable = SeparableSymbol{spatial, mult};
        return sym;
    }
    if (name == "oscillating_amplitude") {
        const double m = params.m;
        const double rho = params.rho;
        const double width = params.width;
        const bool rough = params.rough_x;
        if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("rho must lie in [0, 1]");
        sym.evaluator = [=](const Point& x, const Point& y, const Point& xi) {
            const double br = japanese_bracket(xi, dim);
            const double phase = std::sin(y[0]) * std::pow(br, 1.0 - rho);
            const double xf = rough ? rough_factor(x[0], width) : 1.0 + 0.5 * std::cos(x[0]);
            return xf * std::pow(br, m) * std::polar(1.0, phase);
        };
        sym.order = m;
        sym.rho = rho;
        // y-derivatives of the phase cost <xi>^{1 - rho} each.
        sym.delta = std::max(params.delta, 1.0 - rho);
        sym.kind = rough ? SymbolKind::rough_amplitude : SymbolKind::smooth_amplitude;
        return sym;
    }
    throw std::invalid_argument("unknown symbol preset: " + name);
}

SymbolSpec with_class(SymbolSpec sym, double m, double rho, double delta) {
    sym.order = m;
    sym.rho = rho;
    sym.delta = delta;
    return sym;
}

SymbolSpec dyadic_piece(const SymbolSpec& sym, const LPFamily& fam, int k) {
    if (k < 0 || k > fam.max_index()) throw std::out_of_range("dyadic piece index out of range");
    SymbolSpec out = sym;
    auto base = sym.evaluator;
    out.evaluator = [base, fam, k](const Point& x, const Point& y, const Point& xi) {
        return base(x, y, xi) * fam.piece(k, xi);
    };
    if (sym.separable) {
        auto mult = sym.separable->multiplier;
        out.separable = SeparableSymbol{sym.separable->spatial,
                                        [mult, fam, k](const Point& xi) { return mult(xi) * fam.piece(k, xi); }};
    }
    out.label = sym.label + "_piece" + std::to_string(k);
    return out;
}

SymbolSpec truncated_symbol(const SymbolSpec& sym, const LPFamily& fam, int truncation) {
    if (truncation < 0 || truncation > fam.max_index()) throw std::out_of_range("truncation index out of range");
    SymbolSpec out = sym;
    const int dim = fam.dim();
    auto cutoff = [fam, truncation, dim](const Point& xi) { return fam.partial_sum_radial(truncation, norm(xi, dim)); };
    auto base = sym.evaluator;
    out.evaluator = [base, cutoff](const Point& x, const Point& y, const Point& xi) { return base(x, y, xi) * cutoff(xi); };
    if (sym.separable) {
        auto mult = sym.separable->multiplier;
        out.separable = SeparableSymbol{sym.separable->spatial,
                                        [mult, cutoff](const Point& xi) { return mult(xi) * cutoff(xi); }};
    }
    return out;
}

bool ClassMembershipReport::member() const {
    return !derivatives.empty() &&
           std::all_of(derivatives.begin(), derivatives.end(), [](const DerivativeBound& d) { return d.bounded; });
}

const DerivativeBound& ClassMembershipReport::find(int alpha, int beta, int gamma) const {
    for (const auto& d : derivatives)
        if (d.alpha == alpha && d.beta == beta && d.gamma == gamma) return d;
    throw std::out_of_range("derivative not tested");
}

ClassMembershipReport estimate_class_membership(const SymbolSpec& sym, const PeriodicGrid& grid, int max_order) {
    if (max_order < 0 || max_order > 3) throw std::invalid_argument("max_order must be in 0..3");
    ClassMembershipReport report;
    report.label = sym.label;
    report.m = sym.order;
    report.rho = sym.rho;
    report.delta = sym.delta;

    const double h_xi = grid.freq_spacing();
    const double h_x = grid.spacing();
    const double L = grid.half_length();
    const auto xs = sample_positions(L / 2.0, 9);
    const auto ys = sym.y_independent() ? std::vector<double>{0.0} : sample_positions(L / 2.0, 5);

    const int top_shell = static_cast<int>(std::floor(std::log2(grid.nyquist()))) - 1;
    const int first_shell = std::max(0, top_shell - 2);
    const long half = static_cast<long>(grid.n() / 2);

    for (int total = 0; total <= max_order; ++total) {
        for (int alpha = total; alpha >= 0; --alpha) {
            for (int beta = total - alpha; beta >= 0; --beta) {
                const int gamma = total - alpha - beta;
                if (beta > 0 && is_rough(sym.kind)) continue;
                if (gamma > 0 && sym.y_independent()) continue;
                DerivativeBound bound{alpha, beta, gamma, 0.0, {}, false};
                std::vector<double> shells(static_cast<std::size_t>(top_shell - first_shell + 1), 0.0);
                const double exponent_shift = -sym.rho * alpha + sym.delta * (beta + gamma);
                for (long mi = -half + 2; mi <= half - 2; ++mi) {
                    const Point xi{h_xi * static_cast<double>(mi), 0.0};
                    const double r = std::abs(xi[0]);
                    const double scale = std::pow(japanese_bracket(r), sym.order + exponent_shift);
                    double local = 0.0;
                    for (double xv : xs)
                        for (double yv : ys) {
                            const Complex d = mixed_difference(sym, {xv, 0.0}, {yv, 0.0}, xi, alpha, beta, gamma,
                                                               h_xi, h_x);
                            local = std::max(local, std::abs(d) / scale);
                        }
                    bound.sup = std::max(bound.sup, local);
                    if (r >= 1.0) {
                        const int shell = static_cast<int>(std::floor(std::log2(r)));
                        if (shell >= first_shell && shell <= top_shell) {
                            auto& s = shells[static_cast<std::size_t>(shell - first_shell)];
                            s = std::max(s, local);
                        }
                    }
                }
                bound.shell_sups = shells;
                const double hi = *std::max_element(shells.begin(), shells.end());
                const double lo = *std::min_element(shells.begin(), shells.end());
                // A derivative that vanishes identically is trivially bounded.
                bound.bounded = std::isfinite(bound.sup) && (hi <= 1e-10 || (lo > 0.0 && hi / lo < kShellVariationLimit));
                report.derivatives.push_back(std::move(bound));
            }
        }
    }
    return report;
}

std::vector<double> dyadic_derivative_profile(const SymbolSpec& sym, const LPFamily& fam, const PeriodicGrid& grid,
                                              int alpha) {
    if (alpha < 0 || alpha > 3) throw std::invalid_argument("alpha must be in 0..3");
    const double h = grid.freq_spacing();
    const long half = static_cast<long>(grid.n() / 2);
    const auto xs = sample_positions(grid.half_length() / 2.0, 5);
    std::vector<double> out;
    for (int k = 1; k <= fam.largest_resolved_index(); ++k) {
        const auto piece = dyadic_piece(sym, fam, k);
        const double lo = std::ldexp(1.0, k - 1) - 3.0 * h;
        const double hi = std::ldexp(1.0, k + 1) + 3.0 * h;
        double sup = 0.0;
        for (long mi = -half + 2; mi <= half - 2; ++mi) {
            const Point xi{h * static_cast<double>(mi), 0.0};
            if (std::abs(xi[0]) < lo || std::abs(xi[0]) > hi) continue;
            for (double xv : xs)
                sup = std::max(sup, std::abs(mixed_difference(piece, {xv, 0.0}, {xv, 0.0}, xi, alpha, 0, 0, h, 1.0)));
        }
        out.push_back(sup * std::pow(2.0, -k * (sym.order - sym.rho * alpha)));
    }
    return out;
}

}  // namespace wpsdo
