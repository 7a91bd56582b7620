#include "wpsdo/balls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpsdo {

namespace {

constexpr double kIndexEps = 1e-9;

// Appends the column run [lo_t, hi_t] (unwrapped integer positions) for one row.
void push_run(std::vector<Segment>& out, std::size_t row, long lo_t, long hi_t, long n, BallGeometry geometry) {
    if (lo_t > hi_t) return;
    if (geometry == BallGeometry::clipped) {
        lo_t = std::max(lo_t, 0L);
        hi_t = std::min(hi_t, n - 1);
        if (lo_t <= hi_t) out.push_back({row, static_cast<std::size_t>(lo_t), static_cast<std::size_t>(hi_t)});
        return;
    }
    if (hi_t - lo_t + 1 >= n) {
        out.push_back({row, 0, static_cast<std::size_t>(n - 1)});
        return;
    }
    const long lo = ((lo_t % n) + n) % n;
    const long hi = ((hi_t % n) + n) % n;
    if (lo <= hi) {
        out.push_back({row, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)});
    } else {
        out.push_back({row, 0, static_cast<std::size_t>(hi)});
        out.push_back({row, static_cast<std::size_t>(lo), static_cast<std::size_t>(n - 1)});
    }
}

std::pair<long, long> index_range(const PeriodicGrid& grid, double center, double half_width) {
    const double L = grid.half_length();
    const double dx = grid.spacing();
    const long lo = static_cast<long>(std::ceil((center - half_width + L) / dx - kIndexEps));
    const long hi = static_cast<long>(std::floor((center + half_width + L) / dx + kIndexEps));
    return {lo, hi};
}

}  // namespace

Ball::Ball(Point center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
}

std::vector<Segment> ball_segments(const PeriodicGrid& grid, const Ball& ball, BallGeometry geometry) {
    if (ball.radius() > grid.half_length() * (1.0 + 1e-12))
        throw std::invalid_argument("ball radius exceeds the half-box");
    const long n = static_cast<long>(grid.n());
    std::vector<Segment> out;
    const double r = ball.radius();
    if (grid.dim() == 1) {
        auto [lo, hi] = index_range(grid, ball.center()[0], r);
        push_run(out, 0, lo, hi, n, geometry);
        return out;
    }
    auto [row_lo, row_hi] = index_range(grid, ball.center()[0], r);
    if (geometry == BallGeometry::clipped) {
        row_lo = std::max(row_lo, 0L);
        row_hi = std::min(row_hi, n - 1);
    } else if (row_hi - row_lo + 1 > n) {
        row_hi = row_lo + n - 1;
    }
    const double L = grid.half_length();
    const double dx = grid.spacing();
    for (long t = row_lo; t <= row_hi; ++t) {
        const double dy = -L + static_cast<double>(t) * dx - ball.center()[0];
        const double rem = r * r - dy * dy;
        if (rem < -1e-12 * r * r) continue;
        const double half = std::sqrt(std::max(rem, 0.0));
        auto [lo, hi] = index_range(grid, ball.center()[1], half);
        const auto row = static_cast<std::size_t>(((t % n) + n) % n);
        push_run(out, row, lo, hi, n, geometry);
    }
    return out;
}

std::size_t point_count(std::span<const Segment> segments) {
    std::size_t count = 0;
    for (const auto& s : segments) count += s.hi - s.lo + 1;
    return count;
}

std::vector<std::size_t> ball_indices(const PeriodicGrid& grid, const Ball& ball, BallGeometry geometry) {
    const auto segs = ball_segments(grid, ball, geometry);
    std::vector<std::size_t> out;
    out.reserve(point_count(segs));
    for_each_index(grid, segs, [&](std::size_t i) { out.push_back(i); });
    std::sort(out.begin(), out.end());
    return out;
}

bool ball_inside_box(const PeriodicGrid& grid, const Ball& ball) {
    const double L = grid.half_length();
    const double eps = kIndexEps * grid.spacing();
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const double c = ball.center()[static_cast<std::size_t>(axis)];
        if (c - ball.radius() < -L - eps || c + ball.radius() >= L - eps) return false;
    }
    return true;
}

std::vector<std::size_t> annulus_indices(const PeriodicGrid& grid, const Ball& ball, int j) {
    if (j < 0) throw std::invalid_argument("annulus index must be nonnegative");
    const auto outer = ball_indices(grid, ball.dilated(std::ldexp(1.0, j)));
    if (j == 0) return outer;
    const auto inner = ball_indices(grid, ball.dilated(std::ldexp(1.0, j - 1)));
    std::vector<std::size_t> out;
    std::set_difference(outer.begin(), outer.end(), inner.begin(), inner.end(), std::back_inserter(out));
    return out;
}

double ball_measure(const PeriodicGrid& grid, const Ball& ball) {
    const auto segs = ball_segments(grid, ball);
    return static_cast<double>(point_count(segs)) * grid.cell_volume();
}

Complex ball_average(const SampledFunction& f, const Ball& ball) {
    const auto& grid = f.grid();
    const auto segs = ball_segments(grid, ball);
    const std::size_t count = point_count(segs);
    if (count < kMinBallPoints) throw std::invalid_argument("ball holds fewer than 8 grid points");
    Complex sum = 0.0;
    for_each_index(grid, segs, [&](std::size_t i) { sum += f[i]; });
    return sum / static_cast<double>(count);
}

double ball_integral(const SampledFunction& w, const Ball& ball) {
    const auto& grid = w.grid();
    const auto segs = ball_segments(grid, ball);
    if (point_count(segs) < kMinBallPoints) throw std::invalid_argument("ball holds fewer than 8 grid points");
    double sum = 0.0;
    for_each_index(grid, segs, [&](std::size_t i) { sum += w[i].real(); });
    return sum * grid.cell_volume();
}

PrefixSums::PrefixSums(const PeriodicGrid& grid, std::span<const double> values) : n_(grid.n()) {
    if (values.size() != grid.size()) throw std::invalid_argument("prefix sums: size mismatch");
    const std::size_t rows = grid.dim() == 1 ? 1 : n_;
    prefix_.assign(rows * (n_ + 1), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double* p = prefix_.data() + r * (n_ + 1);
        for (std::size_t c = 0; c < n_; ++c) p[c + 1] = p[c] + values[r * n_ + c];
    }
}

double PrefixSums::sum(std::span<const Segment> segments) const {
    double s = 0.0;
    for (const auto& seg : segments) {
        const double* p = prefix_.data() + seg.row * (n_ + 1);
        s += p[seg.hi + 1] - p[seg.lo];
    }
    return s;
}

std::vector<Ball> BallFamily::balls(const PeriodicGrid& grid) const {
    if (center_stride == 0) throw std::invalid_argument("center stride must be positive");
    std::vector<Ball> out;
    const std::size_t n = grid.n();
    for (double r : radii) {
        for (std::size_t i = 0; i < n; i += center_stride) {
            if (grid.dim() == 1) {
                Ball b({grid.coord(i), 0.0}, r);
                if (!inside_only || ball_inside_box(grid, b)) out.push_back(b);
                continue;
            }
            for (std::size_t j = 0; j < n; j += center_stride) {
                Ball b({grid.coord(i), grid.coord(j)}, r);
                if (!inside_only || ball_inside_box(grid, b)) out.push_back(b);
            }
        }
    }
    return out;
}

std::vector<double> dyadic_radii(double r_min, double r_max) {
    if (!(r_min > 0.0)) throw std::invalid_argument("minimum radius must be positive");
    std::vector<double> out;
    for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= 2.0) out.push_back(r);
    return out;
}

BallFamily default_family(const PeriodicGrid& grid, double radius_cap) {
    BallFamily family;
    family.center_stride = std::max<std::size_t>(1, grid.n() / 32);
    family.radii = dyadic_radii(8.0 * grid.spacing(), std::min(radius_cap, grid.half_length() / 2.0));
    return family;
}

}  // namespace wpsdo
