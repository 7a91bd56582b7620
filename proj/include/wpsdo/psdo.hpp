#pragma once

#include <cstddef>
#include <stdexcept>

#include "wpsdo/grid.hpp"
#include "wpsdo/littlewood_paley.hpp"
#include "wpsdo/symbols.hpp"

namespace wpsdo {

// Amplitude quantization is a direct triple sum; it is refused when
// (N^dim)^3 exceeds max_amplitude_work.
struct OperatorBudget {
    double max_amplitude_work = 512.0 * 512.0 * 512.0;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class QuantizationMode { full, dyadic_truncated };

/**
 * T_a f(x) = (2 pi)^-n sum_xi sum_y a(x, y, xi) e^{i<x - y, xi>} f(y) dy dxi
 * on the grid lattice. The lattice measures satisfy
 * (2 pi)^-n * dxi^n * dx^n * N^n = 1, so a == 1 quantizes to the identity.
 * In dyadic_truncated mode the symbol is replaced by sum_{k <= K'} a_k.
 */
class OperatorInstance {
public:
    OperatorInstance(SymbolSpec symbol, const PeriodicGrid& grid, QuantizationMode mode = QuantizationMode::full,
                     int truncation = -1, OperatorBudget budget = {});

    const SymbolSpec& symbol() const { return symbol_; }
    // Symbol actually quantized (truncated in dyadic_truncated mode).
    const SymbolSpec& effective_symbol() const { return effective_; }
    const PeriodicGrid& grid() const { return grid_; }
    const LPFamily& lp() const { return lp_; }
    QuantizationMode mode() const { return mode_; }
    int truncation() const { return truncation_; }
    const OperatorBudget& budget() const { return budget_; }

private:
    SymbolSpec symbol_;
    SymbolSpec effective_;
    PeriodicGrid grid_;
    LPFamily lp_;
    QuantizationMode mode_;
    int truncation_;
    OperatorBudget budget_;
};

SampledFunction apply(const OperatorInstance& op, const SampledFunction& f);

// Lattice sum without the FFT factorization (y-independent symbols only).
SampledFunction apply_direct(const OperatorInstance& op, const SampledFunction& f);

// Quantizes a y-independent symbol through the amplitude triple sum.
SampledFunction apply_as_amplitude(const OperatorInstance& op, const SampledFunction& f);

SampledFunction apply_dyadic_piece(const OperatorInstance& op, int k, const SampledFunction& f);

// Conjugate transpose of the discrete operator for sum f conj(g) dx^n.
SampledFunction apply_adjoint(const OperatorInstance& op, const SampledFunction& f);

// b T f - T(b f); b must be real-valued.
SampledFunction commutator(const OperatorInstance& op, const SampledFunction& b, const SampledFunction& f);
SampledFunction commutator_adjoint(const OperatorInstance& op, const SampledFunction& b, const SampledFunction& f);

// Kernel values K(x_j, y_l) = (2 pi)^-n sum_xi a(x_j, y_l, xi) e^{i<x_j - y_l, xi>} dxi^n,
// so that T f(x_j) = sum_l K(x_j, y_l) f(y_l) dx^n.
Complex kernel_entry(const OperatorInstance& op, std::size_t j, std::size_t l);
SampledFunction kernel_row(const OperatorInstance& op, std::size_t j);
SampledFunction kernel_column(const OperatorInstance& op, std::size_t l);

// Lattice sum (2 pi)^-n dxi^n sum_xi A(xi) e^{i<z, xi>} at every grid offset z,
// where A is given in FFT storage order. Offsets are the grid coordinates.
SampledFunction offset_kernel_from_lattice(const SampledFunction& symbol_on_lattice);

// Grid index holding the offset x_j - y_l (the lattice kernel is 2L-periodic).
std::size_t offset_index(const PeriodicGrid& grid, std::size_t j, std::size_t l);

}  // namespace wpsdo
