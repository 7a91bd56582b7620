#include "wpsdo/kernel_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wpsdo/parallel.hpp"

namespace wpsdo {

namespace {

SampledFunction lattice_of(const PeriodicGrid& grid, const SymbolSpec& a, const Point& x, const Point& y) {
    SampledFunction out(grid);
    for (std::size_t m = 0; m < grid.size(); ++m) out[m] = a(x, y, grid.frequency(m));
    return out;
}

std::size_t nearest_flat(const PeriodicGrid& grid, const Point& p) {
    if (grid.dim() == 1) return grid.nearest_index(p[0]);
    return grid.flat_index(grid.nearest_index(p[0]), grid.nearest_index(p[1]));
}

void require_piece(const OperatorInstance& op, int k) {
    if (k < 0 || k > op.truncation()) throw std::out_of_range("dyadic index outside 0..K'");
}

std::vector<std::size_t> thin(const std::vector<std::size_t>& idx, std::size_t cap) {
    if (idx.size() <= cap || cap == 0) return idx;
    std::vector<std::size_t> out;
    out.reserve(cap);
    for (std::size_t i = 0; i < cap; ++i) out.push_back(idx[i * idx.size() / cap]);
    return out;
}

double max_pair_difference(std::span<const Complex> v) {
    double d = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b) d = std::max(d, std::abs(v[a] - v[b]));
    return d;
}

Verdict combine(std::initializer_list<Verdict> verdicts) {
    bool inconclusive = false;
    for (auto v : verdicts) {
        if (v == Verdict::fail) return Verdict::fail;
        if (v != Verdict::pass) inconclusive = true;
    }
    return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

std::string to_string(SlopeTest t) {
    switch (t) {
        case SlopeTest::within_tolerance: return "within_tolerance";
        case SlopeTest::at_most: return "at_most";
        case SlopeTest::positive: return "positive";
        case SlopeTest::negative: return "negative";
    }
    return "unknown";
}

void add_fit_items(VerificationReport& rep, const DecayFitReport& fit, const std::string& prefix) {
    for (std::size_t i = 0; i < fit.regressor_values.size(); ++i)
        rep.items.push_back({prefix + fit.regressor + "=" + format_number(fit.regressor_values[i]),
                             {{fit.regressor, fit.regressor_values[i]}},
                             fit.log2_values[i]});
}

void add_fit_metrics(VerificationReport& rep, const DecayFitReport& fit, const std::string& prefix) {
    rep.set_metric(prefix + "slope", fit.fit.slope);
    rep.set_metric(prefix + "intercept", fit.fit.intercept);
    rep.set_metric(prefix + "r_squared", fit.fit.r_squared);
    rep.set_metric(prefix + "expected_slope", fit.expected_slope);
    rep.set_metric(prefix + "tolerance", fit.tolerance);
}

// Decay fits whose samples all sit at round-off level relative to the kernel
// peak pass trivially (e.g. the exact delta kernel of the identity).
DecayFitReport judge_decay_above_floor(const std::string& regressor, const std::vector<double>& x,
                                       const std::vector<double>& log2_y, double log2_floor, double expected) {
    if (*std::max_element(log2_y.begin(), log2_y.end()) > log2_floor)
        return judge_fit(regressor, x, log2_y, expected, 0.0, SlopeTest::at_most, 3);
    DecayFitReport r;
    r.regressor = regressor;
    r.regressor_values = x;
    r.log2_values = log2_y;
    r.expected_slope = expected;
    r.test = SlopeTest::at_most;
    r.verdict = Verdict::pass;
    r.note = "all samples below round-off relative to the peak";
    return r;
}

}  // namespace

std::vector<Point> default_base_points(const PeriodicGrid& grid, std::size_t count) {
    if (count == 0) throw std::invalid_argument("need at least one base point");
    std::vector<Point> out;
    const double half = grid.half_length() / 2.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back({grid.coord(grid.nearest_index(t)), 0.0});
    }
    return out;
}

DyadicKernel materialize_dyadic_kernel(const OperatorInstance& op, int k, std::span<const Point> x_samples) {
    return materialize_dyadic_kernel(op, k, x_samples, x_samples);
}

DyadicKernel materialize_dyadic_kernel(const OperatorInstance& op, int k, std::span<const Point> x_samples,
                                       std::span<const Point> y_slots) {
    require_piece(op, k);
    if (x_samples.size() != y_slots.size()) throw std::invalid_argument("one y slot per base point");
    const auto piece = dyadic_piece(op.symbol(), op.lp(), k);
    DyadicKernel out;
    out.k = k;
    out.base_points.assign(x_samples.begin(), x_samples.end());
    out.y_slots.assign(y_slots.begin(), y_slots.end());
    for (std::size_t s = 0; s < x_samples.size(); ++s)
        out.values.push_back(offset_kernel_from_lattice(lattice_of(op.grid(), piece, x_samples[s], y_slots[s])));
    return out;
}

SampledFunction kernel_row_from_pieces(const OperatorInstance& op, std::size_t j) {
    if (!op.symbol().y_independent()) throw std::invalid_argument("row assembly from pieces needs a y-independent symbol");
    const auto& grid = op.grid();
    const Point x = grid.point(j);
    SampledFunction kappa(grid);
    for (int k = 0; k <= op.truncation(); ++k) {
        const auto piece = dyadic_piece(op.symbol(), op.lp(), k);
        kappa += offset_kernel_from_lattice(lattice_of(grid, piece, x, x));
    }
    SampledFunction row(grid);
    for (std::size_t l = 0; l < grid.size(); ++l) row[l] = kappa[offset_index(grid, j, l)];
    return row;
}

VerificationReport DecayFitReport::to_report(const std::string& experiment) const {
    VerificationReport rep;
    rep.experiment = experiment;
    add_fit_items(rep, *this, "");
    aggregate_items(rep);
    rep.aggregate.slope = fit.slope;
    add_fit_metrics(rep, *this, "");
    rep.verdict = verdict;
    rep.note = "slope test " + to_string(test) + (note.empty() ? "" : "; " + note);
    return rep;
}

DecayFitReport judge_fit(std::string regressor, std::vector<double> x, std::vector<double> log2_y, double expected,
                         double tolerance, SlopeTest test, std::size_t min_points) {
    if (x.size() != log2_y.size()) throw std::invalid_argument("regressor and values differ in length");
    if (x.size() < std::max<std::size_t>(min_points, 2))
        throw std::invalid_argument("degenerate fit: need at least " + std::to_string(std::max<std::size_t>(min_points, 2)) +
                                    " points");
    DecayFitReport r;
    r.regressor = std::move(regressor);
    r.regressor_values = std::move(x);
    r.log2_values = std::move(log2_y);
    r.expected_slope = expected;
    r.tolerance = tolerance;
    r.test = test;
    for (double v : r.log2_values) {
        if (!std::isfinite(v)) {
            r.verdict = Verdict::inconclusive;
            r.note = "non-finite log value (zero or overflowed sample)";
            return r;
        }
    }
    r.fit = fit_line(r.regressor_values, r.log2_values);
    if (r.fit.r_squared < kMinRSquared) {
        r.verdict = Verdict::inconclusive;
        r.note = "R^2 " + std::to_string(r.fit.r_squared) + " below 0.9";
        return r;
    }
    bool ok = false;
    switch (test) {
        case SlopeTest::within_tolerance: ok = std::abs(r.fit.slope - expected) <= tolerance; break;
        case SlopeTest::at_most: ok = r.fit.slope <= expected + tolerance; break;
        case SlopeTest::positive: ok = r.fit.slope > 0.0; break;
        case SlopeTest::negative: ok = r.fit.slope < 0.0; break;
    }
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    return r;
}

DecayFitReport fit_decay_in_k(const OperatorInstance& op, int ell, int k_lo, int k_hi, double tolerance,
                              std::size_t base_point_count) {
    if (ell < 0 || ell > 3) throw std::invalid_argument("ell must be in 0..3");
    if (k_hi - k_lo + 1 < 4) throw std::invalid_argument("degenerate fit: need at least 4 k values");
    require_piece(op, k_lo);
    require_piece(op, k_hi);
    const auto& grid = op.grid();
    const auto base = default_base_points(grid, base_point_count);
    const double zmax = grid.half_length() / 2.0;
    std::vector<double> ks, logs(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (int k = k_lo; k <= k_hi; ++k) ks.push_back(k);
    parallel_for(logs.size(), [&](std::size_t i) {
        const auto kern = materialize_dyadic_kernel(op, k_lo + static_cast<int>(i), base);
        double sup = 0.0;
        for (const auto& v : kern.values) {
            for (std::size_t z = 0; z < grid.size(); ++z) {
                const double r = norm(grid.point(z), grid.dim());
                if (r > zmax) continue;
                sup = std::max(sup, std::pow(r, ell) * std::abs(v[z]));
            }
        }
        logs[i] = std::log2(sup);
    });
    const auto& sym = op.symbol();
    const double expected = grid.dim() + sym.order - sym.rho * ell;
    return judge_fit("k", ks, logs, expected, tolerance, SlopeTest::within_tolerance, 4);
}

double DifferenceTable::at(int j, int k) const {
    const auto jt = std::find(js.begin(), js.end(), j);
    const auto kt = std::find(ks.begin(), ks.end(), k);
    if (jt == js.end() || kt == ks.end()) throw std::out_of_range("(j, k) not tabulated");
    return values[static_cast<std::size_t>(jt - js.begin()) * ks.size() + static_cast<std::size_t>(kt - ks.begin())];
}

DifferenceTable tabulate_kernel_differences(const OperatorInstance& op, const Ball& ball, const std::vector<int>& js,
                                            const std::vector<int>& ks, const DifferenceTableOptions& options) {
    const auto& grid = op.grid();
    for (int j : js) {
        if (j < 2) throw std::invalid_argument("annulus index j must be at least 2");
        const Ball outer = ball.dilated(std::ldexp(1.0, j));
        if (outer.radius() + ball.radius() > grid.half_length() / 2.0 || !ball_inside_box(grid, outer))
            throw std::invalid_argument("ball family leaves the wrap-around-safe half-box");
    }
    for (int k : ks) require_piece(op, k);

    DifferenceTable table;
    table.ball = ball;
    table.js = js;
    table.ks = ks;
    table.values.assign(js.size() * ks.size(), 0.0);
    const auto ys = ball_indices(grid, ball);
    if (ys.empty()) throw std::invalid_argument("ball holds no grid points");
    std::vector<std::vector<std::size_t>> xs;
    for (int j : js) xs.push_back(thin(annulus_indices(grid, ball, j), options.max_x_per_annulus));

    parallel_for(table.values.size(), [&](std::size_t cell) {
        const std::size_t ji = cell / ks.size();
        const int k = ks[cell % ks.size()];
        const auto piece = dyadic_piece(op.symbol(), op.lp(), k);
        std::vector<Complex> vals(ys.size());
        double d = 0.0;
        if (piece.y_independent()) {
            SampledFunction shared(grid);
            if (piece.separable) {
                SampledFunction lattice(grid);
                for (std::size_t m = 0; m < grid.size(); ++m) lattice[m] = piece.separable->multiplier(grid.frequency(m));
                shared = offset_kernel_from_lattice(lattice);
            }
            for (std::size_t xi : xs[ji]) {
                const Point x = grid.point(xi);
                Complex c = 1.0;
                SampledFunction kappa = shared;
                if (piece.separable)
                    c = piece.separable->spatial(x);
                else
                    kappa = offset_kernel_from_lattice(lattice_of(grid, piece, x, x));
                for (std::size_t s = 0; s < ys.size(); ++s) vals[s] = c * kappa[offset_index(grid, xi, ys[s])];
                if (options.same_point)
                    for (std::size_t s = 0; s < ys.size(); ++s) d = std::max(d, std::abs(vals[s] - vals[s]));
                else
                    d = std::max(d, max_pair_difference(vals));
            }
        } else {
            const OperatorInstance piece_op(piece, grid, QuantizationMode::full, -1, op.budget());
            for (std::size_t xi : xs[ji]) {
                for (std::size_t s = 0; s < ys.size(); ++s) vals[s] = kernel_entry(piece_op, xi, ys[s]);
                if (options.same_point)
                    for (std::size_t s = 0; s < ys.size(); ++s) d = std::max(d, std::abs(vals[s] - vals[s]));
                else
                    d = std::max(d, max_pair_difference(vals));
            }
        }
        table.values[cell] = d;
    });
    return table;
}

DecayFitReport fit_difference_in_j(const DifferenceTable& table, int k, int dim) {
    std::vector<double> x, y;
    for (int j : table.js) {
        x.push_back(j);
        y.push_back(std::log2(table.at(j, k)));
    }
    auto r = judge_fit("j", x, y, -static_cast<double>(dim), 0.0, SlopeTest::at_most, 3);
    r.note += (r.note.empty() ? "" : "; ") + std::string("k = ") + std::to_string(k);
    return r;
}

DecayFitReport fit_difference_in_k(const DifferenceTable& table, int j, const std::vector<int>& ks) {
    const double rb = table.ball.radius();
    bool small = true, large = true;
    std::vector<double> x, y;
    for (int k : ks) {
        const bool s = std::ldexp(rb, k) <= 1.0;
        small = small && s;
        large = large && !s;
        x.push_back(k);
        y.push_back(std::log2(table.at(j, k)));
    }
    if (!small && !large) throw std::invalid_argument("k range straddles 2^k r_B = 1");
    auto r = judge_fit("k", x, y, 0.0, 0.0, small ? SlopeTest::positive : SlopeTest::negative, 2);
    r.note += (r.note.empty() ? "" : "; ") + std::string("j = ") + std::to_string(j);
    return r;
}

VerificationReport DifferenceEstimateReport::to_report(const std::string& experiment) const {
    VerificationReport rep;
    rep.experiment = experiment;
    for (int j : table.js)
        for (int k : table.ks)
            rep.items.push_back({"j=" + std::to_string(j) + ",k=" + std::to_string(k),
                                 {{"j", j}, {"k", k}, {"r_B", table.ball.radius()}},
                                 table.at(j, k)});
    aggregate_items(rep);
    rep.aggregate.slope = j_fit.fit.slope;
    add_fit_metrics(rep, j_fit, "j_");
    add_fit_metrics(rep, k_fit_small, "k_small_");
    add_fit_metrics(rep, k_fit_large, "k_large_");
    rep.set_metric("epsilon_j", j_fit.expected_slope - j_fit.fit.slope);
    rep.set_metric("epsilon_prime_small", k_fit_small.fit.slope);
    rep.set_metric("epsilon_prime_large", -k_fit_large.fit.slope);
    rep.verdict = verdict;
    rep.note = "j: " + to_string(j_fit.verdict) + ", k small: " + to_string(k_fit_small.verdict) +
               ", k large: " + to_string(k_fit_large.verdict);
    return rep;
}

DifferenceEstimateReport fit_difference_estimate(const OperatorInstance& op, const Ball& ball,
                                                 const std::vector<int>& js, const std::vector<int>& ks,
                                                 const DifferenceTableOptions& options) {
    std::vector<int> small, large;
    for (int k : ks) (std::ldexp(ball.radius(), k) <= 1.0 ? small : large).push_back(k);
    if (small.size() < 2 || large.size() < 2)
        throw std::invalid_argument("need at least two k values on each side of 2^k r_B = 1");
    DifferenceEstimateReport out;
    out.table = tabulate_kernel_differences(op, ball, js, ks, options);
    out.j_fit = fit_difference_in_j(out.table, small.back(), op.grid().dim());
    out.k_fit_small = fit_difference_in_k(out.table, js.front(), small);
    out.k_fit_large = fit_difference_in_k(out.table, js.front(), large);
    out.verdict = combine({out.j_fit.verdict, out.k_fit_small.verdict, out.k_fit_large.verdict});
    return out;
}

SampledFunction adjoint_kernel_column(const OperatorInstance& op, std::size_t l) {
    const auto& grid = op.grid();
    SampledFunction delta(grid);
    delta[l] = 1.0 / grid.cell_volume();
    return apply_adjoint(op, delta);
}

VerificationReport AdjointKernelReport::to_report(const std::string& experiment) const {
    VerificationReport rep;
    rep.experiment = experiment;
    add_fit_items(rep, far_field, "far_");
    for (std::size_t b = 0; b < difference_fits.size(); ++b) add_fit_items(rep, difference_fits[b], "ball" + std::to_string(b) + "_");
    aggregate_items(rep);
    rep.aggregate.slope = far_field.fit.slope;
    add_fit_metrics(rep, far_field, "far_");
    rep.set_metric("weighted_far_field", weighted_far_field);
    rep.set_metric("peak", peak);
    for (std::size_t b = 0; b < difference_fits.size(); ++b)
        rep.set_metric("ball" + std::to_string(b) + "_j_slope", difference_fits[b].fit.slope);
    rep.verdict = verdict;
    rep.note = far_field.note;
    return rep;
}

AdjointKernelReport adjoint_kernel_bounds(const OperatorInstance& op, int n_exp, const std::vector<Ball>& balls,
                                          const std::vector<int>& js) {
    if (n_exp < 1 || n_exp > 2) throw std::invalid_argument("N_exp must be 1 or 2");
    const auto& grid = op.grid();
    const int n = grid.dim();
    AdjointKernelReport out;

    const std::size_t center = nearest_flat(grid, {0.0, 0.0});
    const auto col = adjoint_kernel_column(op, center);
    const Point y0 = grid.point(center);
    out.peak = col.max_abs();

    // Far field from the critical scale 1 (or 4 dx if larger) out to L/2, in half-octave bins.
    const double r_lo = std::max(1.0, 4.0 * grid.spacing());
    const double r_hi = grid.half_length() / 2.0;
    const int bins = static_cast<int>(std::floor(2.0 * std::log2(r_hi / r_lo)));
    if (bins < 3) throw std::invalid_argument("far field too short for a decay fit");
    std::vector<double> env(static_cast<std::size_t>(bins), 0.0);
    double weighted = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.point(i);
        const double r = norm({x[0] - y0[0], x[1] - y0[1]}, n);
        if (r <= 4.0 * grid.spacing() || r > r_hi || r < r_lo) continue;
        const double v = std::abs(col[i]);
        weighted = std::max(weighted, v * std::pow(r, n + n_exp));
        const int b = std::min(bins - 1, static_cast<int>(std::floor(2.0 * std::log2(r / r_lo))));
        env[static_cast<std::size_t>(b)] = std::max(env[static_cast<std::size_t>(b)], v);
    }
    out.weighted_far_field = out.peak > 0.0 ? weighted / out.peak : 0.0;

    const double floor = kRoundOffFraction * out.peak;
    std::vector<double> x, y;
    for (int b = 0; b < bins; ++b) {
        x.push_back(std::log2(r_lo) + 0.5 * b + 0.25);
        y.push_back(std::log2(std::max(env[static_cast<std::size_t>(b)], std::numeric_limits<double>::min())));
    }
    out.far_field = judge_decay_above_floor("log2|z|", x, y, std::log2(floor), -(n + n_exp));

    const std::size_t max_x = 32;
    for (const auto& ball : balls) {
        const auto ys = ball_indices(grid, ball);
        std::vector<double> jx, jy;
        for (int j : js) {
            const Ball outer = ball.dilated(std::ldexp(1.0, j));
            if (j < 2 || outer.radius() + ball.radius() > r_hi || !ball_inside_box(grid, outer))
                throw std::invalid_argument("ball family leaves the wrap-around-safe half-box");
            const auto xs = thin(annulus_indices(grid, ball, j), max_x);
            std::vector<double> d(xs.size());
            parallel_for(xs.size(), [&](std::size_t i) {
                const auto kcol = adjoint_kernel_column(op, xs[i]);
                std::vector<Complex> vals;
                for (auto yi : ys) vals.push_back(kcol[yi]);
                d[i] = max_pair_difference(vals);
            });
            jx.push_back(j);
            jy.push_back(std::log2(*std::max_element(d.begin(), d.end())));
        }
        out.difference_fits.push_back(judge_decay_above_floor("j", jx, jy, std::log2(floor), -static_cast<double>(n)));
    }

    bool inconclusive = out.far_field.verdict != Verdict::pass && out.far_field.verdict != Verdict::fail;
    bool fail = out.far_field.verdict == Verdict::fail;
    for (const auto& f : out.difference_fits) {
        fail = fail || f.verdict == Verdict::fail;
        inconclusive = inconclusive || (f.verdict != Verdict::pass && f.verdict != Verdict::fail);
    }
    out.verdict = fail ? Verdict::fail : (inconclusive ? Verdict::inconclusive : Verdict::pass);
    return out;
}

}  // namespace wpsdo
