#include "doctest.h"

#include <cmath>
#include <numbers>

#include "wpsdo/kernel_probe.hpp"

using namespace wpsdo;

namespace {

SymbolSpec preset(const std::string& name, double m = 0.0, double rho = 1.0) {
    PresetParams p;
    p.m = m;
    p.rho = rho;
    return preset_symbol(name, p);
}

OperatorInstance truncated(const SymbolSpec& sym, const PeriodicGrid& g) {
    return OperatorInstance(sym, g, QuantizationMode::dyadic_truncated, LPFamily(g).largest_resolved_index());
}

std::vector<int> range(int lo, int hi) {
    std::vector<int> out;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

}  // namespace

TEST_CASE("identity kernels do not depend on the base point") {
    auto g = make_grid(1, 1024, 16.0);
    OperatorInstance op(preset("identity"), g);
    const auto base = default_base_points(g);
    REQUIRE(base.size() == 8);
    for (int k : {0, 3, 6}) {
        const auto kern = materialize_dyadic_kernel(op, k, base);
        for (std::size_t s = 1; s < base.size(); ++s) CHECK(max_abs_diff(kern.values[s], kern.values[0]) < 1e-14);
    }
}

TEST_CASE("K_0 matches a direct quadrature of the bump transform") {
    auto g = make_grid(1, 1024, 16.0);
    OperatorInstance op(preset("identity"), g);
    const std::vector<Point> base{{0.0, 0.0}};
    const auto kern = materialize_dyadic_kernel(op, 0, base);
    const double dxi = std::numbers::pi / g.half_length();
    double sup_direct = 0.0, err = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double z = g.coord(i);
        Complex acc = 0.0;
        for (long m = -static_cast<long>(g.n() / 2); m < static_cast<long>(g.n() / 2); ++m) {
            const double xi = dxi * static_cast<double>(m);
            acc += bump_profile(std::abs(xi)) * std::exp(Complex(0.0, z * xi));
        }
        acc *= dxi / (2.0 * std::numbers::pi);
        sup_direct = std::max(sup_direct, std::abs(acc));
        err = std::max(err, std::abs(acc - kern.values[0][i]));
    }
    CHECK(err < 1e-10);
    CHECK(std::abs(kern.values[0].max_abs() - sup_direct) < 1e-10);
}

TEST_CASE("kernel integrals pick out a_k at zero frequency") {
    auto g = make_grid(1, 1024, 16.0);
    OperatorInstance op(preset("rough_x_modulated", -0.5), g);
    const auto base = default_base_points(g, 4);
    for (int k = 0; k <= 5; ++k) {
        const auto kern = materialize_dyadic_kernel(op, k, base);
        for (std::size_t s = 0; s < base.size(); ++s) {
            Complex integral = 0.0;
            for (std::size_t i = 0; i < g.n(); ++i) integral += kern.values[s][i] * g.spacing();
            const Complex expected = k == 0 ? op.symbol()(base[s], base[s], {0.0, 0.0}) : Complex(0.0);
            CHECK(std::abs(integral - expected) < 1e-12);
        }
    }
}

TEST_CASE("kernel decay in k") {
    auto g = make_grid(1, 4096, 16.0);
    OperatorInstance id(preset("identity"), g);
    auto r0 = fit_decay_in_k(id, 0, 3, 7);
    CHECK(r0.verdict == Verdict::pass);
    CHECK(r0.fit.slope == doctest::Approx(1.0).epsilon(0.15));
    auto r2 = fit_decay_in_k(id, 2, 3, 7);
    CHECK(r2.verdict == Verdict::pass);
    CHECK(r2.fit.slope == doctest::Approx(-1.0).epsilon(0.15));

    OperatorInstance bessel(preset("bessel_order_m", -0.75), g);
    for (int ell = 0; ell <= 3; ++ell) {
        auto r = fit_decay_in_k(bessel, ell, 3, 7);
        CAPTURE(ell);
        CHECK(r.verdict == Verdict::pass);
        CHECK(r.fit.r_squared >= 0.9);
        CHECK(std::abs(r.fit.slope - (1.0 - 0.75 - ell)) <= 0.15);
    }

    CHECK_THROWS_AS(fit_decay_in_k(id, 0, 3, 5), std::invalid_argument);
    CHECK_THROWS_AS(fit_decay_in_k(id, 4, 3, 7), std::invalid_argument);
    CHECK_THROWS_AS(fit_decay_in_k(id, 0, 3, id.truncation() + 1), std::out_of_range);
}

TEST_CASE("kernel decay for an oscillating amplitude with rho = 1/2") {
    auto g = make_grid(1, 4096, 16.0);
    OperatorInstance op(preset("oscillating_amplitude", -0.5, 0.5), g);
    auto r = fit_decay_in_k(op, 2, 3, 7);
    CHECK(r.fit.slope <= r.expected_slope + 0.15);
}

TEST_CASE("kernel rows assembled from dyadic pieces match the operator on deltas") {
    auto g = make_grid(1, 256, 8.0);
    for (const auto& sym : {preset("bessel_order_m", -0.75), preset("rough_x_modulated", -0.75)}) {
        OperatorInstance op(sym, g);
        for (std::size_t j : {std::size_t{3}, std::size_t{128}, std::size_t{250}}) {
            const auto row = kernel_row_from_pieces(op, j);
            double err = 0.0;
            for (std::size_t l = 0; l < g.n(); ++l) {
                SampledFunction delta(g);
                delta[l] = 1.0 / g.spacing();
                err = std::max(err, std::abs(apply(op, delta)[j] - row[l]));
            }
            CHECK(err < 1e-9);
        }
    }
    OperatorInstance amp(preset("oscillating_amplitude", -0.5, 0.5), g);
    CHECK_THROWS_AS(kernel_row_from_pieces(amp, 0), std::invalid_argument);
}

TEST_CASE("judge_fit verdicts") {
    auto ok = judge_fit("k", {1, 2, 3, 4}, {1, 2, 3, 4}, 1.0, 0.15, SlopeTest::within_tolerance);
    CHECK(ok.verdict == Verdict::pass);
    auto off = judge_fit("k", {1, 2, 3, 4}, {1, 3, 5, 7}, 1.0, 0.15, SlopeTest::within_tolerance);
    CHECK(off.verdict == Verdict::fail);
    auto noisy = judge_fit("k", {1, 2, 3, 4}, {1, -1, 1.5, -1}, -0.1, 0.15, SlopeTest::within_tolerance);
    CHECK(noisy.verdict == Verdict::inconclusive);
    auto zero = judge_fit("k", {1, 2, 3}, {1, -INFINITY, 0}, -1.0, 0.0, SlopeTest::at_most);
    CHECK(zero.verdict == Verdict::inconclusive);
    CHECK(judge_fit("k", {1, 2}, {2, 1}, 0, 0, SlopeTest::negative).verdict == Verdict::pass);
    CHECK(judge_fit("k", {1, 2}, {1, 2}, 0, 0, SlopeTest::negative).verdict == Verdict::fail);
    CHECK_THROWS_AS(judge_fit("k", {1, 2, 3}, {1, 2, 3}, 1, 0.1, SlopeTest::positive, 4), std::invalid_argument);
}

TEST_CASE("kernel differences vanish for y = ybar") {
    auto g = make_grid(1, 1024, 16.0);
    const Ball b({0.5, 0.0}, 0.125);
    for (const auto& sym : {preset("rough_x_modulated", -0.75), preset("oscillating_amplitude", -0.5, 0.5)}) {
        OperatorInstance op(sym, g);
        DifferenceTableOptions opts;
        opts.same_point = true;
        opts.max_x_per_annulus = 8;
        const auto t = tabulate_kernel_differences(op, b, {2, 3}, {1, 4}, opts);
        for (double v : t.values) CHECK(v == 0.0);
    }
}

TEST_CASE("kernel difference estimate for the identity") {
    auto g = make_grid(1, 4096, 16.0);
    OperatorInstance op(preset("identity"), g);
    const Ball b({0.0, 0.0}, 1.0 / 32.0);
    auto rep = fit_difference_estimate(op, b, range(2, 7), range(1, 7));
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.k_fit_small.fit.slope > 0.0);
    CHECK(rep.k_fit_large.fit.slope < 0.0);
    CHECK(rep.j_fit.fit.slope <= -1.0);

    const auto t = tabulate_kernel_differences(op, b, range(3, 7), {5});
    auto jfit = fit_difference_in_j(t, 5, 1);
    CHECK(jfit.verdict == Verdict::pass);
    CHECK(jfit.fit.slope <= -1.0);

    CHECK_THROWS_AS(fit_difference_in_k(rep.table, 2, {4, 5, 6}), std::invalid_argument);
    CHECK_THROWS_AS(fit_difference_estimate(op, b, range(2, 7), range(1, 6)), std::invalid_argument);
}

TEST_CASE("kernel difference estimate for rough and smooth symbols of order -0.75") {
    auto g = make_grid(1, 4096, 16.0);
    for (const auto& sym : {preset("bessel_order_m", -0.75), preset("rough_x_modulated", -0.75)}) {
        OperatorInstance op(sym, g);
        auto rep = fit_difference_estimate(op, Ball({1.0, 0.0}, 1.0 / 32.0), range(2, 7), range(1, 7));
        CHECK(rep.verdict == Verdict::pass);
        const auto vr = rep.to_report("difference");
        CHECK(vr.items.size() == 42);
        CHECK(vr.metric("epsilon_j") > 0.0);
    }
}

TEST_CASE("difference tables reject unsafe ball families") {
    auto g = make_grid(1, 1024, 16.0);
    OperatorInstance op(preset("identity"), g);
    CHECK_THROWS_AS(tabulate_kernel_differences(op, Ball({0.0, 0.0}, 1.0), {2, 3}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(tabulate_kernel_differences(op, Ball({0.0, 0.0}, 0.1), {1, 2}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(tabulate_kernel_differences(op, Ball({15.5, 0.0}, 0.1), {2, 3}, {1, 2}), std::invalid_argument);
}

TEST_CASE("adjoint kernel") {
    auto g = make_grid(1, 4096, 16.0);
    const std::vector<Ball> balls{Ball({0.0, 0.0}, 1.0 / 32.0), Ball({1.0, 0.0}, 1.0 / 16.0)};

    auto id = truncated(preset("identity"), g);
    auto rid = adjoint_kernel_bounds(id, 2, balls, range(3, 6));
    CHECK(rid.verdict == Verdict::pass);
    CHECK(rid.weighted_far_field < 1e-6);

    OperatorInstance exact_id(preset("identity"), g);
    CHECK(adjoint_kernel_bounds(exact_id, 1, balls, range(3, 6)).weighted_far_field == 0.0);

    for (int n_exp : {1, 2}) {
        auto rough = adjoint_kernel_bounds(truncated(preset("rough_x_modulated", -0.75), g), n_exp, balls, range(3, 6));
        CAPTURE(n_exp);
        CHECK(rough.verdict == Verdict::pass);
        CHECK(rough.far_field.fit.slope <= -2.0);
    }
    CHECK_THROWS_AS(adjoint_kernel_bounds(id, 3, balls, range(3, 6)), std::invalid_argument);
}

TEST_CASE("adjoint kernel is the conjugate transpose") {
    auto g = make_grid(1, 512, 8.0);
    for (const auto& sym : {preset("bessel_order_m", -1.0), preset("rough_x_modulated", -0.5)}) {
        OperatorInstance op(sym, g);
        for (std::size_t l : {std::size_t{0}, std::size_t{200}, std::size_t{511}}) {
            const auto col = adjoint_kernel_column(op, l);
            for (std::size_t j = 0; j < g.n(); j += 37) CHECK(std::abs(col[j] - std::conj(kernel_entry(op, l, j))) < 1e-12);
        }
    }
}
