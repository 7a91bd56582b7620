#include "wpsdo/function_classes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpsdo/parallel.hpp"

namespace wpsdo {

namespace {

std::vector<double> real_values_checked(const SampledFunction& b) {
    if (!b.is_real()) throw std::invalid_argument("function must be real-valued");
    return b.real_part();
}

double segment_sum(const PeriodicGrid& grid, std::span<const Segment> segs, const std::vector<double>& v,
                   double center, double s) {
    double acc = 0.0;
    for_each_index(grid, segs, [&](std::size_t i) { acc += std::pow(std::abs(v[i] - center), s); });
    return acc;
}

double segment_mean(const PeriodicGrid& grid, std::span<const Segment> segs, const std::vector<double>& v) {
    double acc = 0.0;
    for_each_index(grid, segs, [&](std::size_t i) { acc += v[i]; });
    return acc / static_cast<double>(point_count(segs));
}

std::vector<Segment> checked_segments(const PeriodicGrid& grid, const Ball& ball, BallGeometry geometry) {
    auto segs = ball_segments(grid, ball, geometry);
    if (point_count(segs) < kMinBallPoints) throw std::invalid_argument("ball holds fewer than 8 grid points");
    return segs;
}

// Running sup over radius classes, plus the overall maximizer.
template <typename Result>
void fill_running(Result& out, const std::vector<Ball>& balls, const std::vector<double>& per_ball,
                  const std::vector<double>& radii) {
    out.radii = radii;
    out.running_sup.assign(radii.size(), 0.0);
    for (std::size_t b = 0; b < balls.size(); ++b) {
        for (std::size_t r = 0; r < radii.size(); ++r)
            if (balls[b].radius() <= radii[r] * (1.0 + 1e-12)) out.running_sup[r] = std::max(out.running_sup[r], per_ball[b]);
        if (per_ball[b] > out.value) {
            out.value = per_ball[b];
            out.maximizer = balls[b];
        }
    }
}

std::vector<Ball> family_balls(const PeriodicGrid& grid, const BallFamily& family) {
    auto balls = family.balls(grid);
    if (balls.empty()) throw std::invalid_argument("ball family is empty on this grid");
    return balls;
}

}  // namespace

WeightFn::WeightFn(SampledFunction values, std::string label) : values_(std::move(values)), label_(std::move(label)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const Complex v = values_[i];
        if (!(std::abs(v.imag()) < 1e-12) || !std::isfinite(v.real()) || !(v.real() > 0.0))
            throw std::invalid_argument("weight must be real, finite and strictly positive");
    }
}

WeightFn preset_weight(const std::string& name, const PeriodicGrid& grid, double exponent) {
    const int dim = grid.dim();
    if (name == "unit") return WeightFn(SampledFunction::constant(grid, 1.0), "unit");
    if (name == "power")
        return WeightFn(SampledFunction::from_function(
                            grid, [=](const Point& x) { return std::pow(1.0 + norm(x, dim), exponent); }),
                        "power(" + std::to_string(exponent) + ")");
    if (name == "exponential")
        return WeightFn(SampledFunction::from_function(grid, [=](const Point& x) { return std::exp(norm(x, dim)); }),
                        "exponential");
    throw std::invalid_argument("unknown weight preset: " + name);
}

std::vector<std::string> preset_weight_names() { return {"unit", "power", "exponential"}; }

SampledFunction preset_bmo(const std::string& name, const PeriodicGrid& grid) {
    const int dim = grid.dim();
    const double dx = grid.spacing();
    if (name == "constant") return SampledFunction::constant(grid, 1.0);
    if (name == "linear") return SampledFunction::from_function(grid, [](const Point& x) { return x[0]; });
    if (name == "log_abs")
        return SampledFunction::from_function(grid, [=](const Point& x) { return std::log(norm(x, dim) + dx); });
    throw std::invalid_argument("unknown BMO preset: " + name);
}

std::vector<std::string> preset_bmo_names() { return {"constant", "linear", "log_abs"}; }

std::vector<double> ap_theta_per_ball(const WeightFn& w, double p, double theta, const std::vector<Ball>& balls,
                                      BallGeometry geometry) {
    if (!(p > 1.0)) throw std::invalid_argument("A_p^theta needs p > 1");
    const auto& grid = w.grid();
    const auto wv = w.real_values();
    std::vector<double> dual(wv.size());
    for (std::size_t i = 0; i < wv.size(); ++i) dual[i] = std::pow(wv[i], -1.0 / (p - 1.0));
    const PrefixSums pw(grid, wv), pd(grid, dual);
    const double cell = grid.cell_volume();
    const double p_dual = p / (p - 1.0);
    std::vector<double> out(balls.size());
    parallel_for(balls.size(), [&](std::size_t b) {
        const auto segs = checked_segments(grid, balls[b], geometry);
        const double measure = static_cast<double>(point_count(segs)) * cell;
        const double iw = pw.sum(segs) * cell;
        const double id = pd.sum(segs) * cell;
        out[b] = std::pow(iw, 1.0 / p) * std::pow(id, 1.0 / p_dual) /
                 (measure * std::pow(1.0 + balls[b].radius(), theta));
    });
    return out;
}

ApThetaCharacteristic ap_theta_characteristic(const WeightFn& w, double p, double theta, const BallFamily& family) {
    const auto balls = family_balls(w.grid(), family);
    const auto per_ball = ap_theta_per_ball(w, p, theta, balls, family.geometry);
    ApThetaCharacteristic out;
    out.p = p;
    out.theta = theta;
    out.family = "stride " + std::to_string(family.center_stride) + ", " + std::to_string(family.radii.size()) +
                 " radii, " + std::to_string(balls.size()) + " balls";
    fill_running(out, balls, per_ball, family.radii);
    return out;
}

double mean_oscillation_about(const SampledFunction& b, const Ball& ball, double center_value, double s,
                              BallGeometry geometry) {
    const auto v = real_values_checked(b);
    const auto segs = checked_segments(b.grid(), ball, geometry);
    return segment_sum(b.grid(), segs, v, center_value, s) / static_cast<double>(point_count(segs));
}

double mean_oscillation(const SampledFunction& b, const Ball& ball, double s, BallGeometry geometry) {
    const auto v = real_values_checked(b);
    const auto segs = checked_segments(b.grid(), ball, geometry);
    const double mean = segment_mean(b.grid(), segs, v);
    return segment_sum(b.grid(), segs, v, mean, s) / static_cast<double>(point_count(segs));
}

BmoThetaNorm bmo_theta_norm(const SampledFunction& b, double theta, const BallFamily& family) {
    const auto& grid = b.grid();
    const auto v = real_values_checked(b);
    const auto balls = family_balls(grid, family);
    std::vector<double> per_ball(balls.size());
    parallel_for(balls.size(), [&](std::size_t i) {
        const auto segs = checked_segments(grid, balls[i], family.geometry);
        const double mean = segment_mean(grid, segs, v);
        const double osc = segment_sum(grid, segs, v, mean, 1.0) / static_cast<double>(point_count(segs));
        per_ball[i] = osc / std::pow(1.0 + balls[i].radius(), theta);
    });
    BmoThetaNorm out;
    out.theta = theta;
    fill_running(out, balls, per_ball, family.radii);
    return out;
}

bool stabilized(const std::vector<double>& running_sup, double tol) {
    const std::size_t n = running_sup.size();
    if (n < 3) throw std::invalid_argument("stabilization needs at least three radii");
    auto change = [&](std::size_t i) {
        const double prev = running_sup[i - 1];
        return prev > 0.0 ? std::abs(running_sup[i] - prev) / prev : (running_sup[i] == 0.0 ? 0.0 : INFINITY);
    };
    return change(n - 1) < tol && change(n - 2) < tol;
}

VerificationReport check_monotonicity(const WeightFn& w, double p, double q, double theta, const BallFamily& family) {
    if (!(p > 1.0) || q < p) throw std::invalid_argument("need 1 < p <= q");
    const auto balls = family_balls(w.grid(), family);
    const auto cp = ap_theta_per_ball(w, p, theta, balls, family.geometry);
    const auto cq = ap_theta_per_ball(w, q, theta, balls, family.geometry);
    VerificationReport rep;
    rep.experiment = "ap_monotonicity";
    bool per_ball_ok = true;
    for (std::size_t b = 0; b < balls.size(); ++b) {
        const double ratio = cq[b] / cp[b];
        per_ball_ok = per_ball_ok && cq[b] <= cp[b] * (1.0 + 1e-6);
        rep.items.push_back({"ball" + std::to_string(b),
                             {{"x", balls[b].center()[0]}, {"r", balls[b].radius()}},
                             ratio});
    }
    aggregate_items(rep);
    const double sup_p = *std::max_element(cp.begin(), cp.end());
    const double sup_q = *std::max_element(cq.begin(), cq.end());
    rep.set_metric("p", p);
    rep.set_metric("q", q);
    rep.set_metric("theta", theta);
    rep.set_metric("characteristic_p", sup_p);
    rep.set_metric("characteristic_q", sup_q);
    const bool ok = per_ball_ok && sup_q <= sup_p * (1.0 + 1e-6);
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    rep.note = w.label() + (ok ? "" : ": characteristic increased with p");
    return rep;
}

VerificationReport check_john_nirenberg_variant(const SampledFunction& b, double theta, double s,
                                                const BallFamily& family, int k_max) {
    if (!(s >= 1.0)) throw std::invalid_argument("s must be at least 1");
    if (k_max < 1) throw std::invalid_argument("k_max must be positive");
    const auto& grid = b.grid();
    const auto v = real_values_checked(b);
    const double norm_theta = bmo_theta_norm(b, theta, family).value;
    const auto balls = family_balls(grid, family);

    VerificationReport rep;
    rep.experiment = "john_nirenberg";
    rep.set_metric("bmo_norm", norm_theta);
    rep.set_metric("s", s);
    rep.set_metric("theta", theta);
    if (norm_theta == 0.0) {
        for (const auto& ball : balls) {
            const auto segs = checked_segments(grid, ball, family.geometry);
            const double lhs = segment_sum(grid, segs, v, segment_mean(grid, segs, v), s);
            rep.items.push_back({"part_i", {{"x", ball.center()[0]}, {"r", ball.radius()}}, lhs});
        }
        aggregate_items(rep);
        rep.verdict = rep.aggregate.max == 0.0 ? Verdict::pass : Verdict::fail;
        rep.note = "constant function: every oscillation vanishes";
        return rep;
    }

    std::vector<double> part_i(balls.size());
    parallel_for(balls.size(), [&](std::size_t i) {
        const auto segs = checked_segments(grid, balls[i], family.geometry);
        const double mean = segment_mean(grid, segs, v);
        const double lhs = std::pow(segment_sum(grid, segs, v, mean, s) / static_cast<double>(point_count(segs)), 1.0 / s);
        part_i[i] = lhs / (norm_theta * std::pow(1.0 + balls[i].radius(), theta));
    });
    for (std::size_t i = 0; i < balls.size(); ++i)
        rep.items.push_back({"part_i", {{"x", balls[i].center()[0]}, {"r", balls[i].radius()}}, part_i[i]});
    const double max_i = *std::max_element(part_i.begin(), part_i.end());
    const double med_i = median(part_i);
    rep.set_metric("part_i_max", max_i);
    rep.set_metric("part_i_median", med_i);

    // Same ball set for every k: balls whose 2^k_max dilate stays in the box.
    std::vector<Ball> inner;
    for (const auto& ball : balls)
        if (ball_inside_box(grid, ball.dilated(std::ldexp(1.0, k_max)))) inner.push_back(ball);
    if (inner.empty()) throw std::invalid_argument("no ball keeps its 2^k_max dilate inside the box");
    rep.set_metric("part_ii_balls", static_cast<double>(inner.size()));

    std::vector<double> sup_k;
    bool finite = std::isfinite(max_i);
    for (int k = 1; k <= k_max; ++k) {
        double sup = 0.0, sup_literal = 0.0;
        for (const auto& ball : inner) {
            const auto segs_b = checked_segments(grid, ball, family.geometry);
            const double mean_b = segment_mean(grid, segs_b, v);
            const Ball big = ball.dilated(std::ldexp(1.0, k));
            const auto segs = checked_segments(grid, big, family.geometry);
            const double count = static_cast<double>(point_count(segs));
            const double rhs = norm_theta * k * std::pow(1.0 + big.radius(), theta);
            sup = std::max(sup, std::pow(segment_sum(grid, segs, v, mean_b, s) / count, 1.0 / s) / rhs);
            sup_literal = std::max(sup_literal, std::pow(segment_sum(grid, segs, v, mean_b, 1.0) / count, 1.0 / s) / rhs);
        }
        sup_k.push_back(sup);
        finite = finite && std::isfinite(sup);
        rep.items.push_back({"part_ii_k" + std::to_string(k), {{"k", k}}, sup});
        rep.set_metric("part_ii_k" + std::to_string(k), sup);
        rep.set_metric("literal_k" + std::to_string(k), sup_literal);
    }
    aggregate_items(rep);
    bool nonincreasing = true;
    for (std::size_t k = 1; k < sup_k.size(); ++k) nonincreasing = nonincreasing && sup_k[k] <= sup_k[k - 1] * (1.0 + 1e-12);
    const bool stable_i = max_i <= 2.0 * med_i;
    rep.verdict = finite && stable_i && nonincreasing ? Verdict::pass : Verdict::fail;
    rep.note = std::string("part (i) ") + (stable_i ? "stable" : "max exceeds 2x median") + ", part (ii) " +
               (nonincreasing ? "nonincreasing in k" : "increases in k");
    return rep;
}

VerificationReport check_openness(const WeightFn& w, double p, double theta, const BallFamily& family, double eps) {
    if (!(p - eps > 1.0)) throw std::invalid_argument("p - eps must exceed 1");
    const auto at_p = ap_theta_characteristic(w, p, theta, family);
    const auto below = ap_theta_characteristic(w, p - eps, theta, family);
    VerificationReport rep;
    rep.experiment = "ap_openness";
    for (std::size_t r = 0; r < below.radii.size(); ++r)
        rep.items.push_back({"r" + std::to_string(r), {{"r", below.radii[r]}}, below.running_sup[r]});
    aggregate_items(rep);
    rep.set_metric("characteristic_p", at_p.value);
    rep.set_metric("characteristic_p_minus_eps", below.value);
    const bool stable_p = stabilized(at_p.running_sup);
    const bool stable_below = stabilized(below.running_sup);
    rep.verdict = !stable_p ? Verdict::hypothesis_unverified : (stable_below ? Verdict::pass : Verdict::fail);
    rep.note = stable_p ? "" : "weight not stabilized at p itself";
    return rep;
}

}  // namespace wpsdo
