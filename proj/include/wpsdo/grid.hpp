#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wpsdo {

using Complex = std::complex<double>;

// Points in R^1 use only the first coordinate.
using Point = std::array<double, 2>;

/**
 * PeriodicGrid: uniform sampling of the box [-L, L)^dim.
 *
 * Spatial samples sit at x_i = -L + i*dx with dx = 2L/N. The matched
 * frequency lattice is xi_m = (pi/L)*m for m in {-N/2, ..., N/2-1}. Frequency
 * samples are stored in FFT order: storage index j holds m = j for j < N/2 and
 * m = j - N otherwise. Flat indices are row-major (axis 0 is the row).
 */
class PeriodicGrid {
public:
    // Throws std::invalid_argument unless dim in {1,2}, N a power of two >= 64, L > 0.
    PeriodicGrid(int dim, std::size_t points_per_axis, double half_length);

    int dim() const { return dim_; }
    std::size_t n() const { return n_; }
    double half_length() const { return half_length_; }
    double spacing() const { return spacing_; }
    double freq_spacing() const;
    // |xi| of the unpaired mode -N/2 along one axis.
    double nyquist() const;
    std::size_t size() const { return dim_ == 1 ? n_ : n_ * n_; }

    double cell_volume() const;
    double freq_cell_volume() const;

    double coord(std::size_t i) const { return -half_length_ + static_cast<double>(i) * spacing_; }
    long freq_index(std::size_t j) const;
    double freq(std::size_t j) const;

    Point point(std::size_t flat) const;
    Point frequency(std::size_t flat) const;
    std::size_t flat_index(std::size_t row, std::size_t col) const { return dim_ == 1 ? col : row * n_ + col; }

    // Nearest grid index along one axis (clamped into [0, N-1]).
    std::size_t nearest_index(double x) const;

    bool operator==(const PeriodicGrid& other) const = default;

private:
    int dim_;
    std::size_t n_;
    double half_length_;
    double spacing_;
};

PeriodicGrid make_grid(int dim, std::size_t n, double half_length);

double norm(const Point& p, int dim);

class SampledFunction {
public:
    explicit SampledFunction(const PeriodicGrid& grid);
    SampledFunction(const PeriodicGrid& grid, std::vector<Complex> values);

    static SampledFunction from_function(const PeriodicGrid& grid, const std::function<Complex(const Point&)>& fn);
    static SampledFunction constant(const PeriodicGrid& grid, Complex value);

    const PeriodicGrid& grid() const { return grid_; }
    std::span<const Complex> values() const { return values_; }
    std::span<Complex> values() { return values_; }
    std::size_t size() const { return values_.size(); }

    Complex operator[](std::size_t i) const { return values_[i]; }
    Complex& operator[](std::size_t i) { return values_[i]; }

    // All imaginary parts below 1e-12 and real parts >= 0.
    bool is_real_nonnegative(double tol = 1e-12) const;
    bool is_real(double tol = 1e-12) const;

    SampledFunction& operator+=(const SampledFunction& other);
    SampledFunction& operator-=(const SampledFunction& other);
    SampledFunction& operator*=(Complex s);

    // Pointwise product.
    SampledFunction times(const SampledFunction& other) const;
    SampledFunction conj() const;
    SampledFunction abs() const;
    std::vector<double> real_part() const;

    double max_abs() const;

private:
    PeriodicGrid grid_;
    std::vector<Complex> values_;
};

SampledFunction operator+(SampledFunction a, const SampledFunction& b);
SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator*(Complex s, SampledFunction a);

double max_abs_diff(const SampledFunction& a, const SampledFunction& b);

// Unitary transform pair for samples on the centered grid:
//   F(xi_m) = N^{-dim/2} sum_j f(x_j) exp(-i <xi_m, x_j>)
// The output lives on the same grid, indexed by frequency in FFT order.
SampledFunction dft(const SampledFunction& f);
SampledFunction idft(const SampledFunction& fhat);

// (sum |f|^p w dx^dim)^{1/p}; throws for p < 1 or a weight with nonpositive entries.
double lp_norm(const SampledFunction& f, double p);
double lp_norm(const SampledFunction& f, double p, const SampledFunction& weight);

// Discrete inner product sum f conj(g) dx^dim.
Complex inner_product(const SampledFunction& f, const SampledFunction& g);

}  // namespace wpsdo
