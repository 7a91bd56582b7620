#include "doctest.h"

#include <cmath>

#include "wpsdo/littlewood_paley.hpp"

using namespace wpsdo;

TEST_CASE("bump profile shape") {
    CHECK(bump_profile(0.0) == 1.0);
    CHECK(bump_profile(0.5) == 1.0);
    CHECK(bump_profile(1.0) == 1.0);
    CHECK(bump_profile(2.0) == 0.0);
    CHECK(bump_profile(3.7) == 0.0);
    CHECK(bump_profile(1.5) == doctest::Approx(0.5));
    for (double r = 0.0; r < 3.0; r += 0.01) {
        CHECK(bump_profile(r) >= 0.0);
        CHECK(bump_profile(r) <= 1.0);
        CHECK(bump_profile(r + 0.01) <= bump_profile(r));
    }
}

TEST_CASE("pieces: values, supports, partition") {
    auto g = make_grid(1, 1024, 16.0);
    auto fam = make_lp_family(g);
    CHECK(fam.piece_radial(0, 0.5) == 1.0);
    CHECK(fam.piece_radial(3, 5.0 * 8.0) == 0.0);
    double sum = 0.0;
    for (int k = 0; k <= fam.max_index(); ++k) sum += fam.piece_radial(k, 3.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    // K = ceil(log2 xi_max) + 1
    CHECK(fam.max_index() == static_cast<int>(std::ceil(std::log2(g.nyquist()))) + 1);
}

TEST_CASE("supports of phi_k lie in the dyadic shell") {
    auto g = make_grid(1, 1024, 16.0);
    auto fam = make_lp_family(g);
    for (int k = 1; k <= fam.max_index(); ++k) {
        for (double r = 0.0; r < 4096.0; r *= 1.01, r += 0.001) {
            const double v = fam.piece_radial(k, r);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (r < std::ldexp(1.0, k - 1) || r > std::ldexp(1.0, k + 1)) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("partition residual on lattices") {
    for (auto [dim, n, L] : {std::tuple{1, 64, 8.0}, std::tuple{1, 4096, 16.0}, std::tuple{1, 1024, 32.0},
                             std::tuple{2, 128, 8.0}}) {
        auto g = make_grid(dim, static_cast<std::size_t>(n), L);
        auto fam = make_lp_family(g);
        CHECK(evaluate_partition_residual(fam, g) < 1e-10);
    }
}

TEST_CASE("telescoping identity and at most two active pieces") {
    auto g = make_grid(1, 2048, 16.0);
    auto fam = make_lp_family(g);
    const int K = fam.max_index();
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double r = std::abs(g.freq(j));
        double sum = 0.0;
        int active = 0;
        for (int k = 0; k <= K; ++k) {
            const double v = fam.piece_radial(k, r);
            sum += v;
            active += v != 0.0;
        }
        CHECK(std::abs(sum - fam.partial_sum_radial(K, r)) < 1e-14);
        CHECK(active <= 2);
        // strictly inside (2^{k-1}, 2^k) only phi_{k-1} and phi_k may be nonzero
        if (r > 1.0) {
            const int k = static_cast<int>(std::ceil(std::log2(r)));
            for (int q = 0; q <= K; ++q)
                if (q != k && q != k - 1) CHECK(fam.piece_radial(q, r) == 0.0);
        }
    }
}

TEST_CASE("derivative bounds") {
    auto g = make_grid(1, 4096, 16.0);
    auto fam = make_lp_family(g);

    auto r0 = derivative_bound_check(fam, g, 0);
    CHECK(r0.passed());
    for (const auto& item : r0.items) CHECK(item.value == doctest::Approx(1.0).epsilon(1e-3));

    auto r1 = derivative_bound_check(fam, g, 1);
    CHECK(r1.passed());
    const double ref = r1.metric("reference_k1");
    for (const auto& item : r1.items) {
        CHECK(item.value <= 2.0 * ref);
        CHECK(item.value >= 0.5 * ref);
    }
    CHECK(r1.metric("raw_slope") == doctest::Approx(-1.0).epsilon(0.1));

    CHECK(derivative_bound_check(fam, g, 2).verdict == Verdict::inconclusive);
    auto g32 = make_grid(1, 4096, 32.0);
    CHECK(derivative_bound_check(make_lp_family(g32), g32, 2).passed());
    // third differences at the lattice step cannot resolve phi_1 on this grid
    auto r3 = derivative_bound_check(fam, g, 3);
    CHECK(r3.verdict == Verdict::inconclusive);
    CHECK(r3.metric("reference_k1_half_step") > r3.metric("reference_k1"));
    CHECK_THROWS_AS(derivative_bound_check(fam, g, 4), std::invalid_argument);
}
