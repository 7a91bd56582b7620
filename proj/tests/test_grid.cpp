#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "wpsdo/balls.hpp"
#include "wpsdo/grid.hpp"

using namespace wpsdo;

namespace {

SampledFunction random_function(const PeriodicGrid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    SampledFunction f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = Complex(nd(rng), nd(rng));
    return f;
}

}  // namespace

TEST_CASE("make_grid arithmetic") {
    auto g = make_grid(1, 256, 16.0);
    CHECK(g.spacing() == 0.125);
    CHECK(g.spacing() * 256 == 2.0 * 16.0);

    auto g64 = make_grid(1, 64, 8.0);
    CHECK(g64.nyquist() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(g64.freq(32) == doctest::Approx(-4.0 * std::numbers::pi));
    CHECK(g64.freq(31) == doctest::Approx(31.0 * std::numbers::pi / 8.0));

    auto g2 = make_grid(2, 128, 8.0);
    CHECK(g2.size() == 16384);
}

TEST_CASE("make_grid rejects bad parameters") {
    CHECK_THROWS_AS(make_grid(1, 100, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 32, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, 64, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 64, 0.0), std::invalid_argument);
}

TEST_CASE("frequency lattice symmetric up to the unpaired mode") {
    auto g = make_grid(1, 128, 4.0);
    std::multiset<long> modes;
    for (std::size_t j = 0; j < g.n(); ++j) modes.insert(g.freq_index(j));
    for (long m = 1; m < 64; ++m) {
        CHECK(modes.count(m) == 1);
        CHECK(modes.count(-m) == 1);
    }
    CHECK(modes.count(-64) == 1);
    CHECK(modes.count(64) == 0);
}

TEST_CASE("dft of a constant is a spike at zero frequency") {
    auto g = make_grid(1, 64, 8.0);
    auto f = SampledFunction::constant(g, 1.0);
    auto F = dft(f);
    CHECK(std::abs(F[0] - std::sqrt(64.0)) < 1e-12);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(F[i]) < 1e-12);
}

TEST_CASE("dft of a Gaussian matches the continuum transform") {
    for (double L : {16.0, 20.0}) {
        auto g = make_grid(1, 256, L);
        auto f = SampledFunction::from_function(g, [](const Point& x) { return std::exp(-0.5 * x[0] * x[0]); });
        auto F = dft(f);
        const double scale = std::sqrt(static_cast<double>(g.n())) * g.spacing();
        double err = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double xi = g.freq(j);
            const double expected = std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * xi * xi);
            CHECK(std::abs(F[j].imag()) < 1e-12);
            err = std::max(err, std::abs(F[j] * scale - expected));
        }
        CHECK(err < 1e-8);
    }
}

TEST_CASE("dft round trip and Parseval") {
    std::mt19937_64 rng(7);
    for (int dim : {1, 2}) {
        auto g = make_grid(dim, 64, 5.0);
        for (int trial = 0; trial < 5; ++trial) {
            auto f = random_function(g, rng);
            auto back = idft(dft(f));
            CHECK(max_abs_diff(back, f) < 1e-12 * f.max_abs());
            const double a = lp_norm(f, 2.0);
            const double b = lp_norm(dft(f), 2.0);
            CHECK(std::abs(a - b) < 1e-10 * a);
        }
    }
}

TEST_CASE("lp_norm examples") {
    auto g = make_grid(1, 256, 8.0);
    auto one = SampledFunction::constant(g, 1.0);
    CHECK(lp_norm(one, 2.0, one) == doctest::Approx(4.0).epsilon(1e-14));

    auto ind = SampledFunction::from_function(g, [](const Point& x) { return (x[0] >= 0.0 && x[0] <= 1.0) ? 1.0 : 0.0; });
    CHECK(std::abs(lp_norm(ind, 1.0) - 1.0) <= g.spacing());

    auto gauss = SampledFunction::from_function(g, [](const Point& x) { return std::exp(-0.5 * x[0] * x[0]); });
    CHECK(std::abs(lp_norm(gauss, 2.0) - std::pow(std::numbers::pi, 0.25)) < 1e-6);

    CHECK_THROWS_AS(lp_norm(one, 0.5), std::invalid_argument);
    auto bad = one;
    bad[3] = 0.0;
    CHECK_THROWS_AS(lp_norm(one, 2.0, bad), std::invalid_argument);
}

TEST_CASE("ball averages") {
    auto g = make_grid(1, 256, 16.0);
    auto c = SampledFunction::constant(g, Complex(2.5, -1.0));
    CHECK(std::abs(ball_average(c, Ball({3.0, 0.0}, 2.0)) - Complex(2.5, -1.0)) < 1e-14);

    auto id = SampledFunction::from_function(g, [](const Point& x) { return x[0]; });
    CHECK(std::abs(ball_average(id, Ball({0.0, 0.0}, 1.5))) < g.spacing());

    // brute force sum over grid points of [0.5, 1.5]
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double x = g.coord(i);
        if (std::abs(x - 1.0) <= 0.5) {
            sum += x;
            ++count;
        }
    }
    const Complex avg = ball_average(id, Ball({1.0, 0.0}, 0.5));
    CHECK(std::abs(avg - sum / count) < 1e-14);
    CHECK(std::abs(avg - 1.0) < g.spacing());

    CHECK_THROWS_AS(ball_average(id, Ball({0.0, 0.0}, 0.3)), std::invalid_argument);
    CHECK_THROWS_AS(Ball({0.0, 0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("discrete measure uses point counts") {
    auto g = make_grid(1, 256, 16.0);
    const Ball b({1.0, 0.0}, 0.5);
    CHECK(ball_measure(g, b) == doctest::Approx(9 * 0.125));
    auto ind = SampledFunction::from_function(g, [](const Point& x) { return std::abs(x[0] - 1.0) <= 0.5 ? 1.0 : 0.0; });
    CHECK(ball_average(ind, b).real() == 1.0);
}

TEST_CASE("ball average is linear and agrees with ball integral") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(-6.0, 6.0);
    for (int dim : {1, 2}) {
        auto g = make_grid(dim, 64, 8.0);
        for (int trial = 0; trial < 20; ++trial) {
            auto f = random_function(g, rng);
            auto h = random_function(g, rng);
            const Ball b({ud(rng), ud(rng)}, 1.0 + std::abs(ud(rng)) / 3.0);
            const Complex s(0.3, -1.7);
            const Complex lhs = ball_average(f + s * h, b);
            const Complex rhs = ball_average(f, b) + s * ball_average(h, b);
            CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));

            auto w = f.abs();
            const double via_integral = ball_integral(w, b) / ball_measure(g, b);
            CHECK(std::abs(via_integral - ball_average(w, b).real()) < 1e-12 * via_integral);
        }
    }
}

TEST_CASE("annuli partition the dilated ball") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ud(-2.0, 2.0);
    for (int dim : {1, 2}) {
        auto g = make_grid(dim, 128, 16.0);
        for (int trial = 0; trial < 10; ++trial) {
            const Ball b({ud(rng), ud(rng)}, 0.3 + std::abs(ud(rng)) / 4.0);
            const int J = 4;
            std::vector<std::size_t> all;
            for (int j = 0; j <= J; ++j) {
                auto s = annulus_indices(g, b, j);
                all.insert(all.end(), s.begin(), s.end());
            }
            std::sort(all.begin(), all.end());
            CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
            CHECK(all == ball_indices(g, b.dilated(std::ldexp(1.0, J))));
        }
    }
}

TEST_CASE("periodic and clipped geometry agree for balls inside the box") {
    auto g = make_grid(2, 64, 4.0);
    const Ball inside({1.0, -0.5}, 1.2);
    REQUIRE(ball_inside_box(g, inside));
    CHECK(ball_indices(g, inside) == ball_indices(g, inside, BallGeometry::periodic));

    const Ball edge({3.5, 0.0}, 1.0);
    CHECK_FALSE(ball_inside_box(g, edge));
    CHECK(ball_indices(g, edge).size() < ball_indices(g, edge, BallGeometry::periodic).size());
}

TEST_CASE("prefix sums over segments match direct sums") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ud(-3.0, 3.0);
    for (int dim : {1, 2}) {
        auto g = make_grid(dim, 64, 4.0);
        std::vector<double> v(g.size());
        for (auto& x : v) x = ud(rng);
        PrefixSums ps(g, v);
        for (int trial = 0; trial < 10; ++trial) {
            const Ball b({ud(rng), ud(rng)}, 0.5 + std::abs(ud(rng)) / 2.0);
            for (auto geom : {BallGeometry::clipped, BallGeometry::periodic}) {
                const auto segs = ball_segments(g, b, geom);
                double direct = 0.0;
                for_each_index(g, segs, [&](std::size_t i) { direct += v[i]; });
                CHECK(ps.sum(segs) == doctest::Approx(direct).epsilon(1e-12));
            }
        }
    }
}
