#include "doctest.h"

#include <cmath>
#include <random>

#include "wpsdo/function_classes.hpp"

using namespace wpsdo;

namespace {

// exp of a random trigonometric sum with |log w| <= 2.
WeightFn random_log_bounded_weight(const PeriodicGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-0.5, 0.5), freq(0.05, 3.0), phase(0.0, 6.283185307179586);
    std::array<double, 4> a{}, f{}, ph{};
    for (int i = 0; i < 4; ++i) {
        a[i] = amp(rng);
        f[i] = freq(rng);
        ph[i] = phase(rng);
    }
    auto values = SampledFunction::from_function(g, [&](const Point& x) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += a[i] * std::sin(f[i] * x[0] + ph[i]);
        return std::exp(s);
    });
    return WeightFn(values, "random_log_bounded");
}

double tail_log_slope(const std::vector<double>& radii, const std::vector<double>& sup, std::size_t last) {
    std::vector<double> x(radii.end() - static_cast<long>(last), radii.end());
    std::vector<double> y;
    for (auto it = sup.end() - static_cast<long>(last); it != sup.end(); ++it) y.push_back(std::log(*it));
    return fit_line(x, y).slope;
}

}  // namespace

TEST_CASE("weights must be real, finite and positive") {
    auto g = make_grid(1, 64, 8.0);
    CHECK_NOTHROW(WeightFn(SampledFunction::constant(g, 2.0), "two"));
    CHECK_THROWS_AS(WeightFn(SampledFunction::constant(g, 0.0), "zero"), std::invalid_argument);
    CHECK_THROWS_AS(WeightFn(SampledFunction::constant(g, Complex(1.0, 0.1)), "complex"), std::invalid_argument);
    CHECK_THROWS_AS(WeightFn(SampledFunction::constant(g, INFINITY), "inf"), std::invalid_argument);
    CHECK_THROWS_AS(preset_weight("nope", g), std::invalid_argument);
    CHECK_THROWS_AS(preset_bmo("nope", g), std::invalid_argument);
}

TEST_CASE("unit weight has characteristic one") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    auto w = preset_weight("unit", g);
    for (double p : {1.5, 2.0, 3.0, 8.0}) CHECK(std::abs(ap_theta_characteristic(w, p, 0.0, fam).value - 1.0) < 1e-10);
    CHECK_THROWS_AS(ap_theta_characteristic(w, 1.0, 0.0, fam), std::invalid_argument);
    CHECK_THROWS_AS(ap_theta_characteristic(w, 0.5, 0.0, fam), std::invalid_argument);
}

TEST_CASE("characteristic is at least one ball by ball") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        auto w = random_log_bounded_weight(g, rng);
        for (double v : ap_theta_per_ball(w, 2.5, 0.0, fam.balls(g))) CHECK(v >= 1.0 - 1e-12);
    }
}

TEST_CASE("(1+|x|)^2 is unstable at theta = 0 and stabilizes at theta = 2") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    auto w = preset_weight("power", g, 2.0);
    auto c0 = ap_theta_characteristic(w, 2.0, 0.0, fam);
    auto c2 = ap_theta_characteristic(w, 2.0, 2.0, fam);
    CHECK_FALSE(stabilized(c0.running_sup));
    CHECK(c0.running_sup.back() > 1.3 * c0.running_sup[c0.running_sup.size() - 2]);
    CHECK(stabilized(c2.running_sup));
    CHECK(c2.value < c0.value);
}

TEST_CASE("e^|x| is in no tested A_p^theta") {
    // at p = 4 the characteristic grows like e^{r/2}, overtaking (1 + r)^8 past r ~ 100
    auto g = make_grid(1, 4096, 256.0);
    auto fam = default_family(g, 128.0);
    auto w = preset_weight("exponential", g);
    for (double p : {1.5, 2.0, 4.0}) {
        for (double theta : {0.0, 2.0, 4.0, 8.0}) {
            auto c = ap_theta_characteristic(w, p, theta, fam);
            CAPTURE(p);
            CAPTURE(theta);
            CHECK_FALSE(stabilized(c.running_sup));
            CHECK(tail_log_slope(c.radii, c.running_sup, 2) > 0.1);
        }
    }
}

TEST_CASE("characteristic is nonincreasing in theta") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        auto w = trial == 0 ? preset_weight("power", g, 1.5) : random_log_bounded_weight(g, rng);
        double prev = INFINITY;
        for (double theta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const double v = ap_theta_characteristic(w, 2.0, theta, fam).value;
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("small balls see a nearly constant weight") {
    auto g = make_grid(1, 1024, 32.0);
    BallFamily fam;
    fam.center_stride = 16;
    fam.radii = {8.0 * g.spacing()};
    for (double gamma : {0.5, 1.5, 2.0}) {
        auto w = preset_weight("power", g, gamma);
        CHECK(ap_theta_characteristic(w, 2.0, 0.0, fam).value == doctest::Approx(1.0).epsilon(0.1));
    }
}

TEST_CASE("bounded A_p presets stay bounded for every theta > 0") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    for (const auto& w : {preset_weight("unit", g), preset_weight("power", g, 0.5)}) {
        auto c0 = ap_theta_characteristic(w, 2.0, 0.0, fam);
        REQUIRE(stabilized(c0.running_sup));
        for (double theta : {0.5, 1.0, 3.0}) {
            auto c = ap_theta_characteristic(w, 2.0, theta, fam);
            CHECK(stabilized(c.running_sup));
            CHECK(c.value <= c0.value);
        }
    }
}

TEST_CASE("BMO norms") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    CHECK(bmo_theta_norm(preset_bmo("constant", g), 0.0, fam).value < 1e-12);

    auto x = preset_bmo("linear", g);
    const auto n1 = bmo_theta_norm(x, 1.0, fam);
    CHECK(n1.value >= 0.45);
    CHECK(n1.value <= 0.5);

    // mean oscillation of x over an interval of radius r is r/2
    for (double r : fam.radii) CHECK(mean_oscillation(x, Ball({1.0, 0.0}, r)) == doctest::Approx(r / 2.0).epsilon(0.02));

    const auto n0 = bmo_theta_norm(x, 0.0, fam);
    CHECK(fit_line(n0.radii, n0.running_sup).slope == doctest::Approx(0.5).epsilon(0.1));
    CHECK_FALSE(stabilized(n0.running_sup));

    auto log_abs = preset_bmo("log_abs", g);
    CHECK(bmo_theta_norm(log_abs, 0.0, fam).value < 1.0);

    CHECK_THROWS_AS(bmo_theta_norm(SampledFunction::constant(g, Complex(0.0, 1.0)), 0.0, fam), std::invalid_argument);
}

TEST_CASE("BMO norm vanishes only for constants") {
    auto g = make_grid(1, 256, 16.0);
    auto fam = default_family(g, 8.0);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        SampledFunction b(g);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = nd(rng);
        CHECK(bmo_theta_norm(b, 0.5, fam).value > 1e-3);
    }
}

TEST_CASE("theta = 0 BMO norm is invariant under periodic shifts") {
    auto g = make_grid(1, 1024, 16.0);
    BallFamily fam;
    fam.center_stride = 32;
    fam.radii = dyadic_radii(8.0 * g.spacing(), 8.0);
    fam.inside_only = false;
    fam.geometry = BallGeometry::periodic;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    SampledFunction b(g);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = nd(rng) + std::sin(0.3 * g.coord(i));
    const double base = bmo_theta_norm(b, 0.0, fam).value;
    for (std::size_t shift : {32, 96, 512}) {
        SampledFunction shifted(g);
        for (std::size_t i = 0; i < b.size(); ++i) shifted[(i + shift) % g.n()] = b[i];
        CHECK(bmo_theta_norm(shifted, 0.0, fam).value == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("monotonicity in p") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    auto unit = check_monotonicity(preset_weight("unit", g), 2.0, 3.0, 0.0, fam);
    CHECK(unit.passed());
    CHECK(unit.metric("characteristic_p") == doctest::Approx(1.0));
    CHECK(unit.metric("characteristic_q") == doctest::Approx(1.0));

    CHECK(check_monotonicity(preset_weight("power", g, 1.5), 2.0, 4.0, 1.5, fam).passed());
    CHECK_THROWS_AS(check_monotonicity(preset_weight("unit", g), 3.0, 2.0, 0.0, fam), std::invalid_argument);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> up(1.1, 4.0), ut(0.0, 2.0);
    int passed = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double p = up(rng);
        const double q = p + up(rng);
        passed += check_monotonicity(random_log_bounded_weight(g, rng), p, q, ut(rng), fam).passed();
    }
    CHECK(passed == 100);
}

TEST_CASE("John-Nirenberg variant") {
    auto g = make_grid(1, 4096, 32.0);
    auto fam = default_family(g, 16.0);
    auto c = check_john_nirenberg_variant(preset_bmo("constant", g), 1.0, 2.0, fam);
    CHECK(c.passed());
    CHECK(c.aggregate.max == 0.0);

    auto x = preset_bmo("linear", g);
    for (double s : {1.0, 2.0, 4.0}) {
        auto rep = check_john_nirenberg_variant(x, 1.0, s, fam);
        CAPTURE(s);
        CHECK(rep.passed());
        if (s == 2.0) CHECK(rep.metric("part_i_max") <= 2.0);
        for (int k = 2; k <= 5; ++k)
            CHECK(rep.metric("part_ii_k" + std::to_string(k)) <= rep.metric("part_ii_k" + std::to_string(k - 1)));
    }
}

TEST_CASE("openness at p - 0.1") {
    auto g = make_grid(1, 1024, 32.0);
    auto fam = default_family(g, 16.0);
    CHECK(check_openness(preset_weight("power", g, 1.5), 2.0, 1.5, fam).passed());
    CHECK(check_openness(preset_weight("exponential", g), 2.0, 0.0, fam).verdict == Verdict::hypothesis_unverified);
}
