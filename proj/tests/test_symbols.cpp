#include "doctest.h"

#include <cmath>

#include "wpsdo/symbols.hpp"

using namespace wpsdo;

namespace {

PresetParams params(double m, double rho = 1.0) {
    PresetParams p;
    p.m = m;
    p.rho = rho;
    return p;
}

}  // namespace

TEST_CASE("japanese bracket") {
    CHECK(japanese_bracket(0.0) == 1.0);
    CHECK(japanese_bracket(1.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(japanese_bracket(3.0) == doctest::Approx(std::sqrt(10.0)));
    CHECK(japanese_bracket({0.6, 0.8}, 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(japanese_bracket({-3.0, 99.0}, 1) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("preset values") {
    auto id = preset_symbol("identity", {});
    CHECK(id({1.0, 0.0}, {2.0, 0.0}, {37.0, 0.0}) == Complex(1.0));

    auto bessel = preset_symbol("bessel_order_m", params(-1.0));
    CHECK(std::abs(bessel({}, {}, {1.0, 0.0}) - std::pow(2.0, -0.5)) < 1e-15);
    CHECK(bessel.kind == SymbolKind::smooth_symbol);

    auto rough = preset_symbol("rough_x_modulated", params(-0.75));
    CHECK(rough.kind == SymbolKind::rough_symbol);
    for (double x = -5.0; x <= 5.0; x += 0.37) {
        for (double xi : {0.0, 1.0, 10.0, 300.0}) {
            const double base = std::pow(japanese_bracket(xi), -0.75);
            const double v = rough({x, 0.0}, {}, {xi, 0.0}).real();
            CHECK(v >= base - 1e-15);
            CHECK(v <= 3.0 * base + 1e-15);
        }
    }

    auto amp = preset_symbol("oscillating_amplitude", params(-0.5, 0.5));
    CHECK(is_amplitude(amp.kind));
    CHECK(amp.delta == 0.5);
    CHECK(std::abs(amp({0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}) - Complex(2.0)) < 1e-15);

    CHECK_THROWS_AS(preset_symbol("no_such_symbol", {}), std::invalid_argument);
}

TEST_CASE("class membership examples") {
    auto g = make_grid(1, 1024, 16.0);

    auto id_report = estimate_class_membership(preset_symbol("identity", {}), g);
    CHECK(id_report.member());
    for (int alpha = 1; alpha <= 3; ++alpha) CHECK(id_report.find(alpha, 0, 0).sup < 1e-12);

    auto bessel = preset_symbol("bessel_order_m", params(-1.0));
    auto b_report = estimate_class_membership(bessel, g);
    CHECK(b_report.member());
    CHECK(b_report.find(1, 0, 0).sup <= 2.0);

    auto wrong = with_class(bessel, bessel.order - 1.0, 1.0, 0.0);
    auto w_report = estimate_class_membership(wrong, g);
    CHECK_FALSE(w_report.member());
    CHECK_FALSE(w_report.find(0, 0, 0).bounded);
}

TEST_CASE("every preset confirms its declared class and rejects m - 1") {
    auto g = make_grid(1, 1024, 16.0);
    for (const auto& name : preset_symbol_names()) {
        for (double rho : {1.0, 0.5}) {
            if (name != "oscillating_amplitude" && rho != 1.0) continue;
            auto sym = preset_symbol(name, params(-0.75, rho));
            CAPTURE(name);
            CAPTURE(rho);
            CHECK(estimate_class_membership(sym, g).member());
            CHECK_FALSE(estimate_class_membership(with_class(sym, sym.order - 1.0, sym.rho, sym.delta), g).member());
        }
    }
}

TEST_CASE("rough presets carry no x-derivative checks") {
    auto g = make_grid(1, 1024, 16.0);
    auto report = estimate_class_membership(preset_symbol("rough_x_modulated", params(0.0)), g);
    for (const auto& d : report.derivatives) CHECK(d.beta == 0);
    CHECK_THROWS_AS(report.find(0, 1, 0), std::out_of_range);
}

TEST_CASE("dyadic pieces") {
    auto g = make_grid(1, 1024, 16.0);
    auto fam = make_lp_family(g);
    auto id = preset_symbol("identity", {});
    CHECK(dyadic_piece(id, fam, 2)({}, {}, {16.0, 0.0}) == Complex(0.0));
    CHECK(dyadic_piece(id, fam, 0)({}, {}, {0.0, 0.0}) == Complex(1.0));
    CHECK_THROWS_AS(dyadic_piece(id, fam, fam.max_index() + 1), std::out_of_range);
    CHECK_THROWS_AS(dyadic_piece(id, fam, -1), std::out_of_range);

    auto amp = preset_symbol("oscillating_amplitude", params(-0.5, 0.5));
    for (std::size_t j = 0; j < g.n(); j += 7) {
        const Point xi{g.freq(j), 0.0};
        const Point x{0.3, 0.0}, y{-1.1, 0.0};
        Complex sum = 0.0;
        for (int k = 0; k <= fam.max_index(); ++k) sum += dyadic_piece(amp, fam, k)(x, y, xi);
        CHECK(std::abs(sum - amp(x, y, xi)) < 1e-14);
    }
}

TEST_CASE("dyadic piece derivative bounds are uniform in k") {
    auto g = make_grid(1, 4096, 32.0);
    auto fam = make_lp_family(g);
    for (const auto& name : {"bessel_order_m", "rough_x_modulated"}) {
        auto sym = preset_symbol(name, params(-0.75));
        for (int alpha = 0; alpha <= 2; ++alpha) {
            const auto profile = dyadic_derivative_profile(sym, fam, g, alpha);
            REQUIRE(profile.size() >= 4);
            const double hi = *std::max_element(profile.begin(), profile.end());
            const double lo = *std::min_element(profile.begin() + 1, profile.end());
            CAPTURE(name);
            CAPTURE(alpha);
            CHECK(hi / lo < 4.0);
        }
    }
}
