#include "wpsdo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fftw3.h>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "fft.hpp"

namespace wpsdo {

namespace detail {

namespace {

struct PlanKey {
    int dim;
    std::size_t n;
    int sign;
    auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int dim, std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        PlanKey key{dim, n, sign};
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const std::size_t total = dim == 1 ? n : n * n;
        auto* scratch = fftw_alloc_complex(total);
        const int fsign = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = dim == 1
            ? fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, fsign, flags)
            : fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), scratch, scratch, fsign, flags);
        fftw_free(scratch);
        if (plan == nullptr) throw std::runtime_error("fftw planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void fft_inplace(std::complex<double>* data, int dim, std::size_t n, int sign) {
    fftw_plan plan = plan_cache().get(dim, n, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

}  // namespace detail

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// (-1)^{m0 + m1} for the storage index; N is even so j and j - N share parity.
double centering_sign(const PeriodicGrid& grid, std::size_t flat) {
    const std::size_t n = grid.n();
    std::size_t parity = grid.dim() == 1 ? flat : (flat / n) + (flat % n);
    return (parity & 1U) ? -1.0 : 1.0;
}

void require_same_grid(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("sampled functions live on different grids");
}

}  // namespace

PeriodicGrid::PeriodicGrid(int dim, std::size_t points_per_axis, double half_length)
    : dim_(dim), n_(points_per_axis), half_length_(half_length), spacing_(0.0) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (!is_power_of_two(points_per_axis) || points_per_axis < 64)
        throw std::invalid_argument("points per axis must be a power of two >= 64");
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw std::invalid_argument("half length must be positive");
    spacing_ = 2.0 * half_length / static_cast<double>(points_per_axis);
}

double PeriodicGrid::freq_spacing() const { return std::numbers::pi / half_length_; }

double PeriodicGrid::nyquist() const { return freq_spacing() * static_cast<double>(n_ / 2); }

double PeriodicGrid::cell_volume() const { return dim_ == 1 ? spacing_ : spacing_ * spacing_; }

double PeriodicGrid::freq_cell_volume() const {
    const double h = freq_spacing();
    return dim_ == 1 ? h : h * h;
}

long PeriodicGrid::freq_index(std::size_t j) const {
    const auto sj = static_cast<long>(j);
    const auto sn = static_cast<long>(n_);
    return sj < sn / 2 ? sj : sj - sn;
}

double PeriodicGrid::freq(std::size_t j) const { return freq_spacing() * static_cast<double>(freq_index(j)); }

Point PeriodicGrid::point(std::size_t flat) const {
    if (dim_ == 1) return {coord(flat), 0.0};
    return {coord(flat / n_), coord(flat % n_)};
}

Point PeriodicGrid::frequency(std::size_t flat) const {
    if (dim_ == 1) return {freq(flat), 0.0};
    return {freq(flat / n_), freq(flat % n_)};
}

std::size_t PeriodicGrid::nearest_index(double x) const {
    const double t = std::round((x + half_length_) / spacing_);
    if (t <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(t), n_ - 1);
}

PeriodicGrid make_grid(int dim, std::size_t n, double half_length) { return PeriodicGrid(dim, n, half_length); }

double norm(const Point& p, int dim) { return dim == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]); }

SampledFunction::SampledFunction(const PeriodicGrid& grid) : grid_(grid), values_(grid.size()) {}

SampledFunction::SampledFunction(const PeriodicGrid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("value count does not match grid size");
}

SampledFunction SampledFunction::from_function(const PeriodicGrid& grid,
                                               const std::function<Complex(const Point&)>& fn) {
    SampledFunction out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = fn(grid.point(i));
    return out;
}

SampledFunction SampledFunction::constant(const PeriodicGrid& grid, Complex value) {
    return SampledFunction(grid, std::vector<Complex>(grid.size(), value));
}

bool SampledFunction::is_real(double tol) const {
    return std::all_of(values_.begin(), values_.end(), [tol](Complex v) { return std::abs(v.imag()) < tol; });
}

bool SampledFunction::is_real_nonnegative(double tol) const {
    return std::all_of(values_.begin(), values_.end(),
                       [tol](Complex v) { return std::abs(v.imag()) < tol && v.real() >= 0.0; });
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

SampledFunction& SampledFunction::operator*=(Complex s) {
    for (auto& v : values_) v *= s;
    return *this;
}

SampledFunction SampledFunction::times(const SampledFunction& other) const {
    require_same_grid(*this, other);
    SampledFunction out(grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] * other.values_[i];
    return out;
}

SampledFunction SampledFunction::conj() const {
    SampledFunction out(grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = std::conj(values_[i]);
    return out;
}

SampledFunction SampledFunction::abs() const {
    SampledFunction out(grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = std::abs(values_[i]);
    return out;
}

std::vector<double> SampledFunction::real_part() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i].real();
    return out;
}

double SampledFunction::max_abs() const {
    double m = 0.0;
    for (auto v : values_) m = std::max(m, std::abs(v));
    return m;
}

SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator*(Complex s, SampledFunction a) { return a *= s; }

double max_abs_diff(const SampledFunction& a, const SampledFunction& b) {
    require_same_grid(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SampledFunction dft(const SampledFunction& f) {
    const auto& grid = f.grid();
    std::vector<Complex> data(f.values().begin(), f.values().end());
    detail::fft_inplace(data.data(), grid.dim(), grid.n(), -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * centering_sign(grid, i);
    return SampledFunction(grid, std::move(data));
}

SampledFunction idft(const SampledFunction& fhat) {
    const auto& grid = fhat.grid();
    std::vector<Complex> data(fhat.values().begin(), fhat.values().end());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= centering_sign(grid, i);
    detail::fft_inplace(data.data(), grid.dim(), grid.n(), +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
    for (auto& v : data) v *= scale;
    return SampledFunction(grid, std::move(data));
}

double lp_norm(const SampledFunction& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    double sum = 0.0;
    for (auto v : f.values()) sum += std::pow(std::abs(v), p);
    return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double lp_norm(const SampledFunction& f, double p, const SampledFunction& weight) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    require_same_grid(f, weight);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = weight[i].real();
        if (!(w > 0.0)) throw std::invalid_argument("weight must be strictly positive");
        sum += std::pow(std::abs(f[i]), p) * w;
    }
    return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

Complex inner_product(const SampledFunction& f, const SampledFunction& g) {
    require_same_grid(f, g);
    Complex sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * std::conj(g[i]);
    return sum * f.grid().cell_volume();
}

}  // namespace wpsdo
