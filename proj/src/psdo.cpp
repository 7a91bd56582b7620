#include "wpsdo/psdo.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "wpsdo/parallel.hpp"

namespace wpsdo {

namespace {

// e^{-i <y_l, xi_m>} from the roots of unity: with x_l = -L + l dx the phase is
// (-1)^m e^{-2 pi i m l / N} per axis, and m == storage index mod N.
class PhaseTable {
public:
    explicit PhaseTable(const PeriodicGrid& grid) : grid_(grid), roots_(grid.n()) {
        const std::size_t n = grid.n();
        for (std::size_t k = 0; k < n; ++k)
            roots_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }

    Complex minus(std::size_t freq_flat, std::size_t pos_flat) const {
        const std::size_t n = grid_.n();
        if (grid_.dim() == 1) return axis(freq_flat, pos_flat);
        return axis(freq_flat / n, pos_flat / n) * axis(freq_flat % n, pos_flat % n);
    }

private:
    Complex axis(std::size_t m, std::size_t l) const {
        const Complex w = roots_[(m * l) % grid_.n()];
        return (m & 1U) ? -w : w;
    }

    PeriodicGrid grid_;
    std::vector<Complex> roots_;
};

double lattice_prefactor(const PeriodicGrid& grid) {
    const double per_axis = grid.freq_spacing() / (2.0 * std::numbers::pi);
    return grid.dim() == 1 ? per_axis : per_axis * per_axis;
}

void check_amplitude_budget(const OperatorInstance& op) {
    const double p = static_cast<double>(op.grid().size());
    if (p * p * p > op.budget().max_amplitude_work)
        throw BudgetExceeded("amplitude quantization on " + std::to_string(op.grid().size()) +
                             " points exceeds the configured work budget");
}

void require_grid(const OperatorInstance& op, const SampledFunction& f) {
    if (!(op.grid() == f.grid())) throw std::invalid_argument("function does not live on the operator grid");
}

SampledFunction multiplier_on_lattice(const PeriodicGrid& grid, const PointFn& mult) {
    SampledFunction out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = mult(grid.frequency(i));
    return out;
}

SampledFunction spatial_on_grid(const PeriodicGrid& grid, const PointFn& spatial) {
    SampledFunction out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = spatial(grid.point(i));
    return out;
}

SampledFunction apply_separable(const SeparableSymbol& sep, const SampledFunction& f) {
    const auto& grid = f.grid();
    auto fhat = dft(f);
    const auto mult = multiplier_on_lattice(grid, sep.multiplier);
    auto out = idft(fhat.times(mult));
    return out.times(spatial_on_grid(grid, sep.spatial));
}

SampledFunction apply_separable_adjoint(const SeparableSymbol& sep, const SampledFunction& g) {
    const auto& grid = g.grid();
    const auto c = spatial_on_grid(grid, sep.spatial).conj();
    auto ghat = dft(g.times(c));
    const auto mult = multiplier_on_lattice(grid, sep.multiplier).conj();
    return idft(ghat.times(mult));
}

SampledFunction amplitude_sum(const OperatorInstance& op, const SampledFunction& f, bool adjoint) {
    check_amplitude_budget(op);
    const auto& grid = op.grid();
    const auto& a = op.effective_symbol();
    const PhaseTable phase(grid);
    const std::size_t P = grid.size();
    const double scale = lattice_prefactor(grid) * grid.cell_volume();
    std::vector<Point> pts(P), freqs(P);
    for (std::size_t i = 0; i < P; ++i) {
        pts[i] = grid.point(i);
        freqs[i] = grid.frequency(i);
    }
    SampledFunction out(grid);
    parallel_for(P, [&](std::size_t j) {
        Complex outer = 0.0;
        for (std::size_t m = 0; m < P; ++m) {
            Complex inner = 0.0;
            for (std::size_t l = 0; l < P; ++l) {
                // forward: a(x_j, y_l, xi) e^{-i y_l xi} f(y_l)
                // adjoint: conj(a(x_l, y_j, xi)) e^{-i x_l xi} g(x_l)
                const Complex av = adjoint ? std::conj(a(pts[l], pts[j], freqs[m])) : a(pts[j], pts[l], freqs[m]);
                inner += av * phase.minus(m, l) * f[l];
            }
            outer += std::conj(phase.minus(m, j)) * inner;
        }
        out[j] = scale * outer;
    });
    return out;
}

}  // namespace

OperatorInstance::OperatorInstance(SymbolSpec symbol, const PeriodicGrid& grid, QuantizationMode mode, int truncation,
                                   OperatorBudget budget)
    : symbol_(std::move(symbol)), effective_(symbol_), grid_(grid), lp_(grid), mode_(mode), truncation_(truncation),
      budget_(budget) {
    if (!symbol_.evaluator) throw std::invalid_argument("symbol has no evaluator");
    if (mode_ == QuantizationMode::dyadic_truncated) {
        if (truncation_ < 0 || truncation_ > lp_.largest_resolved_index())
            throw std::invalid_argument("truncation index must keep supp phi_K' inside the Nyquist band");
        effective_ = truncated_symbol(symbol_, lp_, truncation_);
    } else {
        truncation_ = lp_.max_index();
    }
}

SampledFunction offset_kernel_from_lattice(const SampledFunction& symbol_on_lattice) {
    const auto& grid = symbol_on_lattice.grid();
    auto k = idft(symbol_on_lattice);
    const double scale = lattice_prefactor(grid) * std::sqrt(static_cast<double>(grid.size()));
    k *= scale;
    return k;
}

std::size_t offset_index(const PeriodicGrid& grid, std::size_t j, std::size_t l) {
    const std::size_t n = grid.n();
    auto axis = [n](std::size_t a, std::size_t b) { return (a + n + n / 2 - b) % n; };
    if (grid.dim() == 1) return axis(j, l);
    return axis(j / n, l / n) * n + axis(j % n, l % n);
}

SampledFunction apply_direct(const OperatorInstance& op, const SampledFunction& f) {
    require_grid(op, f);
    const auto& a = op.effective_symbol();
    if (!a.y_independent()) throw std::invalid_argument("apply_direct needs a y-independent symbol");
    const auto& grid = op.grid();
    const std::size_t P = grid.size();
    const PhaseTable phase(grid);
    // Continuum-normalized transform: fhat(xi) = sum_y f(y) e^{-i y xi} dy.
    auto fhat = dft(f);
    fhat *= std::sqrt(static_cast<double>(P)) * grid.cell_volume();
    const double scale = lattice_prefactor(grid);
    SampledFunction out(grid);
    parallel_for(P, [&](std::size_t j) {
        const Point x = grid.point(j);
        Complex acc = 0.0;
        for (std::size_t m = 0; m < P; ++m) acc += a(x, x, grid.frequency(m)) * fhat[m] * std::conj(phase.minus(m, j));
        out[j] = scale * acc;
    });
    return out;
}

SampledFunction apply_as_amplitude(const OperatorInstance& op, const SampledFunction& f) {
    require_grid(op, f);
    return amplitude_sum(op, f, false);
}

SampledFunction apply(const OperatorInstance& op, const SampledFunction& f) {
    require_grid(op, f);
    const auto& a = op.effective_symbol();
    if (!a.y_independent()) return amplitude_sum(op, f, false);
    if (a.separable) return apply_separable(*a.separable, f);
    return apply_direct(op, f);
}

SampledFunction apply_dyadic_piece(const OperatorInstance& op, int k, const SampledFunction& f) {
    if (k < 0 || k > op.truncation()) throw std::out_of_range("dyadic piece index out of range");
    OperatorInstance piece(dyadic_piece(op.symbol(), op.lp(), k), op.grid(), QuantizationMode::full, -1, op.budget());
    return apply(piece, f);
}

SampledFunction apply_adjoint(const OperatorInstance& op, const SampledFunction& g) {
    require_grid(op, g);
    const auto& a = op.effective_symbol();
    if (!a.y_independent()) return amplitude_sum(op, g, true);
    if (a.separable) return apply_separable_adjoint(*a.separable, g);
    const auto& grid = op.grid();
    const std::size_t P = grid.size();
    const PhaseTable phase(grid);
    // G(xi) = sum_x conj(a(x, xi)) e^{-i x xi} g(x) dx, then the inverse lattice sum.
    SampledFunction G(grid);
    parallel_for(P, [&](std::size_t m) {
        const Point xi = grid.frequency(m);
        Complex acc = 0.0;
        for (std::size_t j = 0; j < P; ++j) {
            const Point x = grid.point(j);
            acc += std::conj(a(x, x, xi)) * phase.minus(m, j) * g[j];
        }
        G[m] = acc * grid.cell_volume();
    });
    auto out = idft(G);
    out *= lattice_prefactor(grid) * std::sqrt(static_cast<double>(P));
    return out;
}

SampledFunction commutator(const OperatorInstance& op, const SampledFunction& b, const SampledFunction& f) {
    if (!b.is_real()) throw std::invalid_argument("commutator symbol b must be real-valued");
    return b.times(apply(op, f)) - apply(op, b.times(f));
}

SampledFunction commutator_adjoint(const OperatorInstance& op, const SampledFunction& b, const SampledFunction& f) {
    if (!b.is_real()) throw std::invalid_argument("commutator symbol b must be real-valued");
    return b.times(apply_adjoint(op, f)) - apply_adjoint(op, b.times(f));
}

Complex kernel_entry(const OperatorInstance& op, std::size_t j, std::size_t l) {
    const auto& grid = op.grid();
    const auto& a = op.effective_symbol();
    const PhaseTable phase(grid);
    const Point x = grid.point(j);
    const Point y = grid.point(l);
    Complex acc = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m)
        acc += a(x, y, grid.frequency(m)) * std::conj(phase.minus(m, j)) * phase.minus(m, l);
    return lattice_prefactor(grid) * acc;
}

SampledFunction kernel_row(const OperatorInstance& op, std::size_t j) {
    const auto& grid = op.grid();
    const auto& a = op.effective_symbol();
    SampledFunction row(grid);
    if (a.y_independent()) {
        const Point x = grid.point(j);
        SampledFunction lattice(grid);
        for (std::size_t m = 0; m < grid.size(); ++m) lattice[m] = a(x, x, grid.frequency(m));
        const auto kappa = offset_kernel_from_lattice(lattice);
        for (std::size_t l = 0; l < grid.size(); ++l) row[l] = kappa[offset_index(grid, j, l)];
        return row;
    }
    parallel_for(grid.size(), [&](std::size_t l) { row[l] = kernel_entry(op, j, l); });
    return row;
}

SampledFunction kernel_column(const OperatorInstance& op, std::size_t l) {
    const auto& grid = op.grid();
    const auto& a = op.effective_symbol();
    SampledFunction col(grid);
    if (a.y_independent() && a.separable) {
        const auto kappa = offset_kernel_from_lattice(multiplier_on_lattice(grid, a.separable->multiplier));
        for (std::size_t j = 0; j < grid.size(); ++j)
            col[j] = a.separable->spatial(grid.point(j)) * kappa[offset_index(grid, j, l)];
        return col;
    }
    parallel_for(grid.size(), [&](std::size_t j) { col[j] = kernel_entry(op, j, l); });
    return col;
}

}  // namespace wpsdo
