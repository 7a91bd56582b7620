#pragma once

#include <cstddef>
#include <vector>

#include "wpsdo/grid.hpp"

namespace wpsdo {

// Closed ball B(center, radius).
class Ball {
public:
    Ball(Point center, double radius);

    const Point& center() const { return center_; }
    double radius() const { return radius_; }

    Ball dilated(double lambda) const { return Ball(center_, lambda * radius_); }

private:
    Point center_;
    double radius_;
};

// Ball membership is Euclidean and clipped to the box by default; the periodic
// geometry measures distance on the torus instead.
enum class BallGeometry { clipped, periodic };

// Inclusive run of column indices within one row (row = 0 in 1D).
struct Segment {
    std::size_t row;
    std::size_t lo;
    std::size_t hi;
};

// Grid points of B as row runs. Throws if radius exceeds the half-box.
std::vector<Segment> ball_segments(const PeriodicGrid& grid, const Ball& ball,
                                   BallGeometry geometry = BallGeometry::clipped);

std::size_t point_count(std::span<const Segment> segments);

template <typename F>
void for_each_index(const PeriodicGrid& grid, std::span<const Segment> segments, F&& fn) {
    for (const auto& s : segments)
        for (std::size_t c = s.lo; c <= s.hi; ++c) fn(grid.flat_index(s.row, c));
}

std::vector<std::size_t> ball_indices(const PeriodicGrid& grid, const Ball& ball,
                                      BallGeometry geometry = BallGeometry::clipped);

bool ball_inside_box(const PeriodicGrid& grid, const Ball& ball);

// Grid indices of S_j(B) = 2^j B \ 2^{j-1} B, with S_0(B) = B.
std::vector<std::size_t> annulus_indices(const PeriodicGrid& grid, const Ball& ball, int j);

// Discrete measure |B| = (grid points in B) * dx^dim.
double ball_measure(const PeriodicGrid& grid, const Ball& ball);

// Averages reject balls holding fewer than 8 grid points.
Complex ball_average(const SampledFunction& f, const Ball& ball);
double ball_integral(const SampledFunction& w, const Ball& ball);

inline constexpr std::size_t kMinBallPoints = 8;

// Row-wise prefix sums of a real array; sums over ball segments in O(rows).
class PrefixSums {
public:
    PrefixSums(const PeriodicGrid& grid, std::span<const double> values);

    double sum(std::span<const Segment> segments) const;

private:
    std::size_t n_;
    std::vector<double> prefix_;  // per row, n+1 entries
};

/**
 * Structured two-parameter ball family: centers on a sublattice with a fixed
 * stride (in grid points, applied along every axis) and a list of radii.
 * With inside_only set, balls poking out of the box are dropped.
 */
struct BallFamily {
    std::size_t center_stride = 8;
    std::vector<double> radii;
    bool inside_only = true;
    BallGeometry geometry = BallGeometry::clipped;

    std::vector<Ball> balls(const PeriodicGrid& grid) const;
};

// Radii r_min * 2^i up to and including r_max (within 1e-12 relative).
std::vector<double> dyadic_radii(double r_min, double r_max);

// Default sweep: stride N/32, radii dyadic from 8 dx to min(cap, L/2).
BallFamily default_family(const PeriodicGrid& grid, double radius_cap);

}  // namespace wpsdo
