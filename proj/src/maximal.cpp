#include "wpsdo/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "wpsdo/parallel.hpp"

namespace wpsdo {

namespace {

// Offline "x[i] = max(x[i], v) for i in [lo, hi]" over a flat array: each
// update touches two cells of a reverse sparse table, finish() pushes down.
class RangeMax {
public:
    explicit RangeMax(std::size_t n) : n_(n) {
        std::size_t levels = 1;
        while ((std::size_t{1} << levels) <= n) ++levels;
        table_.assign(levels, std::vector<double>(n, 0.0));
    }

    void add(std::size_t lo, std::size_t hi, double v) {
        const std::size_t len = hi - lo + 1;
        std::size_t k = 0;
        while ((std::size_t{2} << k) <= len) ++k;
        auto& row = table_[k];
        row[lo] = std::max(row[lo], v);
        const std::size_t tail = hi + 1 - (std::size_t{1} << k);
        row[tail] = std::max(row[tail], v);
    }

    std::vector<double> finish() {
        for (std::size_t k = table_.size() - 1; k > 0; --k) {
            const std::size_t half = std::size_t{1} << (k - 1);
            for (std::size_t i = 0; i + (std::size_t{1} << k) <= n_; ++i) {
                const double v = table_[k][i];
                if (v == 0.0) continue;
                table_[k - 1][i] = std::max(table_[k - 1][i], v);
                table_[k - 1][i + half] = std::max(table_[k - 1][i + half], v);
            }
        }
        return table_[0];
    }

private:
    std::size_t n_;
    std::vector<std::vector<double>> table_;
};

void add_segments(RangeMax& rm, const PeriodicGrid& grid, std::span<const Segment> segs, double v) {
    for (const auto& s : segs) rm.add(grid.flat_index(s.row, s.lo), grid.flat_index(s.row, s.hi), v);
}

// Per-row column window of a clipped ball, for intersecting segments.
struct RowWindow {
    std::vector<long> lo, hi;

    RowWindow(const PeriodicGrid& grid, const Ball& ball) {
        const std::size_t rows = grid.dim() == 1 ? 1 : grid.n();
        lo.assign(rows, 1);
        hi.assign(rows, 0);
        for (const auto& s : ball_segments(grid, ball)) {
            lo[s.row] = static_cast<long>(s.lo);
            hi[s.row] = static_cast<long>(s.hi);
        }
    }

    std::vector<Segment> intersect(std::span<const Segment> segs) const {
        std::vector<Segment> out;
        for (const auto& s : segs) {
            const long a = std::max(static_cast<long>(s.lo), lo[s.row]);
            const long b = std::min(static_cast<long>(s.hi), hi[s.row]);
            if (a <= b) out.push_back({s.row, static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
        }
        return out;
    }
};

std::vector<double> abs_power(const SampledFunction& g, double s) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::pow(std::abs(g[i]), s);
    return out;
}

double average(const PeriodicGrid& grid, std::span<const Segment> segs, const std::vector<double>& v) {
    double acc = 0.0;
    for_each_index(grid, segs, [&](std::size_t i) { acc += v[i]; });
    return acc / static_cast<double>(point_count(segs));
}

double sharp_average(const SampledFunction& g, std::span<const Segment> segs) {
    Complex mean = 0.0;
    for_each_index(g.grid(), segs, [&](std::size_t i) { mean += g[i]; });
    mean /= static_cast<double>(point_count(segs));
    double acc = 0.0;
    for_each_index(g.grid(), segs, [&](std::size_t i) { acc += std::abs(g[i] - mean); });
    return acc / static_cast<double>(point_count(segs));
}

SampledFunction to_function(const PeriodicGrid& grid, const std::vector<double>& v) {
    SampledFunction out(grid);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

enum class LocalKind { average, sharp };

SampledFunction local_sup(const SampledFunction& g, double alpha, std::size_t stride, LocalKind kind,
                          const Ball* restrict_to) {
    const auto& grid = g.grid();
    const auto balls = local_family(grid, alpha, stride).balls(grid);
    const auto absg = abs_power(g, 1.0);
    std::optional<RowWindow> window;
    if (restrict_to) window.emplace(grid, *restrict_to);
    std::vector<std::vector<Segment>> segs(balls.size());
    std::vector<double> vals(balls.size(), 0.0);
    parallel_for(balls.size(), [&](std::size_t b) {
        auto s = ball_segments(grid, balls[b]);
        if (window) s = window->intersect(s);
        if (!s.empty()) vals[b] = kind == LocalKind::average ? average(grid, s, absg) : sharp_average(g, s);
        segs[b] = std::move(s);
    });
    RangeMax rm(grid.size());
    for (std::size_t b = 0; b < balls.size(); ++b)
        if (!segs[b].empty()) add_segments(rm, grid, segs[b], vals[b]);
    return to_function(grid, rm.finish());
}

std::vector<Point> stride_centers(const PeriodicGrid& grid, std::size_t stride) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < grid.n(); i += stride) {
        if (grid.dim() == 1) {
            out.push_back({grid.coord(i), 0.0});
            continue;
        }
        for (std::size_t j = 0; j < grid.n(); j += stride) out.push_back({grid.coord(i), grid.coord(j)});
    }
    return out;
}

double weighted_lp(const std::vector<double>& v, const std::vector<double>& w, double p, double cell) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(v[i], p) * w[i];
    return std::pow(acc * cell, 1.0 / p);
}

}  // namespace

std::vector<int> CriticalCover::multiplicity(double sigma) const {
    std::vector<int> out(grid.size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.point(i);
        for (const auto& c : centers)
            if (norm({x[0] - c[0], x[1] - c[1]}, grid.dim()) <= sigma * radius * (1.0 + 1e-12)) ++out[i];
    }
    return out;
}

int CriticalCover::max_multiplicity(double sigma) const {
    const auto m = multiplicity(sigma);
    return *std::max_element(m.begin(), m.end());
}

bool CriticalCover::covers() const {
    const auto m = multiplicity(1.0);
    return std::all_of(m.begin(), m.end(), [](int c) { return c >= 1; });
}

std::vector<std::size_t> CriticalCover::covering(std::size_t flat) const {
    std::vector<std::size_t> out;
    const Point x = grid.point(flat);
    for (std::size_t j = 0; j < centers.size(); ++j)
        if (norm({x[0] - centers[j][0], x[1] - centers[j][1]}, grid.dim()) <= radius * (1.0 + 1e-12)) out.push_back(j);
    return out;
}

CriticalCover build_critical_cover(const PeriodicGrid& grid) {
    if (grid.half_length() < 4.0) throw std::invalid_argument("critical cover needs L >= 4");
    constexpr double kSeparation = 0.4;
    const int dim = grid.dim();
    const double L = grid.half_length();
    const auto cells = static_cast<std::size_t>(std::ceil(2.0 * L / kSeparation)) + 1;
    auto cell_of = [&](double t) {
        return std::min(cells - 1, static_cast<std::size_t>(std::floor((t + L) / kSeparation)));
    };
    std::vector<std::vector<std::size_t>> buckets(dim == 1 ? cells : cells * cells);
    CriticalCover cover{grid, {}, 1.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.point(i);
        const std::size_t cx = cell_of(x[0]);
        const std::size_t cy = dim == 1 ? 0 : cell_of(x[1]);
        bool free = true;
        for (long dxc = -1; dxc <= 1 && free; ++dxc) {
            for (long dyc = (dim == 1 ? 0 : -1); dyc <= (dim == 1 ? 0 : 1) && free; ++dyc) {
                const long a = static_cast<long>(cx) + dxc, b = static_cast<long>(cy) + dyc;
                if (a < 0 || b < 0 || a >= static_cast<long>(cells) || b >= static_cast<long>(cells)) continue;
                for (std::size_t j : buckets[static_cast<std::size_t>(a) * (dim == 1 ? 1 : cells) + static_cast<std::size_t>(b)]) {
                    const Point& c = cover.centers[j];
                    if (norm({x[0] - c[0], x[1] - c[1]}, dim) < kSeparation * (1.0 - 1e-12)) {
                        free = false;
                        break;
                    }
                }
            }
        }
        if (!free) continue;
        buckets[cx * (dim == 1 ? 1 : cells) + cy].push_back(cover.centers.size());
        cover.centers.push_back(x);
    }
    return cover;
}

BallFamily local_family(const PeriodicGrid& grid, double alpha, std::size_t stride) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    BallFamily family;
    family.center_stride = stride;
    family.radii = dyadic_radii(8.0 * grid.spacing(), std::min(alpha, grid.half_length()));
    if (family.radii.empty()) throw std::invalid_argument("alpha is below the smallest family radius 8 dx");
    family.inside_only = false;
    return family;
}

SampledFunction m_loc(const SampledFunction& g, double alpha, std::size_t stride) {
    return local_sup(g, alpha, stride, LocalKind::average, nullptr);
}

SampledFunction m_sharp_loc(const SampledFunction& g, double alpha, std::size_t stride) {
    return local_sup(g, alpha, stride, LocalKind::sharp, nullptr);
}

SampledFunction m_q(const SampledFunction& g, const Ball& q, double alpha, std::size_t stride) {
    return local_sup(g, alpha, stride, LocalKind::average, &q);
}

SampledFunction m_sharp_q(const SampledFunction& g, const Ball& q, double alpha, std::size_t stride) {
    return local_sup(g, alpha, stride, LocalKind::sharp, &q);
}

SampledFunction hardy_littlewood_s(const SampledFunction& g, double s, std::size_t stride) {
    if (!(s >= 1.0)) throw std::invalid_argument("s must be at least 1");
    const auto& grid = g.grid();
    const auto balls = local_family(grid, grid.half_length(), stride).balls(grid);
    const auto gs = abs_power(g, s);
    const PrefixSums ps(grid, gs);
    RangeMax rm(grid.size());
    for (const auto& b : balls) {
        const auto segs = ball_segments(grid, b);
        add_segments(rm, grid, segs, ps.sum(segs) / static_cast<double>(point_count(segs)));
    }
    auto v = rm.finish();
    for (auto& x : v) x = std::pow(x, 1.0 / s);
    return to_function(grid, v);
}

GKappaResult g_kappa_p(const SampledFunction& f, double kappa, double p, int n_big, std::size_t stride) {
    if (!(kappa > 0.0) || !(p >= 1.0)) throw std::invalid_argument("need kappa > 0 and p >= 1");
    const auto& grid = f.grid();
    if (n_big < static_cast<double>(grid.dim()) / p + 1.0) throw std::invalid_argument("N must be at least n/p + 1");
    if (stride * grid.spacing() > 1.0) throw std::invalid_argument("center stride leaves points outside every critical ball");
    const auto fp = abs_power(f, p);
    const PrefixSums ps(grid, fp);
    double box = 0.0;
    for (double v : fp) box += v;
    box /= static_cast<double>(fp.size());
    const double L = grid.half_length();
    int k_sat = 0;
    while (std::ldexp(kappa, k_sat) <= L) ++k_sat;
    const double decay = std::ldexp(1.0, -n_big);
    const double tail = std::pow(box, 1.0 / p) * std::pow(decay, k_sat) / (1.0 - decay);

    const auto centers = stride_centers(grid, stride);
    std::vector<double> vals(centers.size());
    std::vector<double> tails(centers.size(), 0.0);
    parallel_for(centers.size(), [&](std::size_t c) {
        double sum = 0.0;
        for (int k = 0; k < k_sat; ++k) {
            const auto segs = ball_segments(grid, Ball(centers[c], std::ldexp(kappa, k)));
            sum += std::pow(decay, k) * std::pow(ps.sum(segs) / static_cast<double>(point_count(segs)), 1.0 / p);
        }
        vals[c] = sum + tail;
        tails[c] = sum > 0.0 ? tail / sum : (tail > 0.0 ? INFINITY : 0.0);
    });
    RangeMax rm(grid.size());
    for (std::size_t c = 0; c < centers.size(); ++c) add_segments(rm, grid, ball_segments(grid, Ball(centers[c], 1.0)), vals[c]);
    GKappaResult out{to_function(grid, rm.finish()), *std::max_element(tails.begin(), tails.end())};
    return out;
}

SampledFunction m_tilde_s(const SampledFunction& f, double s, const CriticalCover& cover, std::size_t stride) {
    if (!(s >= 1.0)) throw std::invalid_argument("s must be at least 1");
    const auto& grid = f.grid();
    if (!(grid == cover.grid)) throw std::invalid_argument("cover lives on a different grid");
    const auto balls = local_family(grid, grid.half_length(), stride).balls(grid);
    std::vector<std::vector<Segment>> ball_segs(balls.size());
    for (std::size_t b = 0; b < balls.size(); ++b) ball_segs[b] = ball_segments(grid, balls[b]);
    const auto fs = abs_power(f, s);

    std::vector<std::vector<double>> per_cover(cover.centers.size());
    parallel_for(cover.centers.size(), [&](std::size_t j) {
        std::vector<double> masked(fs.size(), 0.0);
        for_each_index(grid, ball_segments(grid, cover.ball(j, 8.0)), [&](std::size_t i) { masked[i] = fs[i]; });
        const PrefixSums ps(grid, masked);
        const RowWindow q(grid, cover.ball(j));
        RangeMax rm(grid.size());
        for (std::size_t b = 0; b < balls.size(); ++b) {
            const auto inter = q.intersect(ball_segs[b]);
            if (inter.empty()) continue;
            const double avg = ps.sum(ball_segs[b]) / static_cast<double>(point_count(ball_segs[b]));
            if (avg > 0.0) add_segments(rm, grid, inter, avg);
        }
        per_cover[j] = rm.finish();
    });
    std::vector<double> out(grid.size(), 0.0);
    for (const auto& v : per_cover)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], v[i]);
    for (auto& x : out) x = std::pow(x, 1.0 / s);
    return to_function(grid, out);
}

FsTerms fs_terms(const SampledFunction& g, const WeightFn& w, double p, double beta, const CriticalCover& cover) {
    const auto& grid = g.grid();
    const auto wv = w.real_values();
    const double cell = grid.cell_volume();
    const auto lhs_f = m_loc(g, beta).real_part();
    const auto sharp_f = m_sharp_loc(g, 4.0).real_part();
    FsTerms t;
    for (std::size_t i = 0; i < wv.size(); ++i) {
        t.lhs += std::pow(lhs_f[i], p) * wv[i] * cell;
        t.sharp_term += std::pow(sharp_f[i], p) * wv[i] * cell;
    }
    const auto absg = abs_power(g, 1.0);
    for (std::size_t j = 0; j < cover.centers.size(); ++j) {
        double wq = 0.0;
        for_each_index(grid, ball_segments(grid, cover.ball(j)), [&](std::size_t i) { wq += wv[i] * cell; });
        const double avg = average(grid, ball_segments(grid, cover.ball(j, 2.0)), absg);
        t.critical_term += wq * std::pow(avg, p);
    }
    return t;
}

RatioStatistics ratio_statistics(const std::vector<double>& ratios, const std::vector<double>& shifts, double factor,
                                 double slope_tol) {
    if (ratios.size() != shifts.size() || ratios.empty()) throw std::invalid_argument("ratios and shifts must match");
    RatioStatistics st;
    st.max = max_value(ratios);
    st.median = median(ratios);
    std::vector<double> x, y;
    bool positive = true;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] > 0.0) || !std::isfinite(ratios[i])) {
            positive = false;
            continue;
        }
        x.push_back(std::log(1.0 + std::abs(shifts[i])));
        y.push_back(std::log(ratios[i]));
    }
    const bool spread = x.size() >= 2 && *std::max_element(x.begin(), x.end()) > *std::min_element(x.begin(), x.end());
    st.trend_slope = spread ? fit_line(x, y).slope : 0.0;
    st.stable = positive && st.max <= factor * st.median && std::abs(st.trend_slope) <= slope_tol;
    return st;
}

VerificationReport check_fs_inequality(const std::vector<CorpusItem>& corpus, const WeightFn& w, double p,
                                       double beta, const CriticalCover& cover) {
    VerificationReport rep;
    rep.experiment = "fefferman_stein";
    std::vector<double> ratios(corpus.size()), shifts(corpus.size());
    std::vector<FsTerms> terms(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        terms[i] = fs_terms(corpus[i].f, w, p, beta, cover);
        ratios[i] = terms[i].ratio();
        shifts[i] = corpus[i].center[0];
        rep.items.push_back({corpus[i].id,
                             {{"shift", shifts[i]}, {"width", corpus[i].width}, {"modulation", corpus[i].modulation},
                              {"lhs", terms[i].lhs}, {"sharp_term", terms[i].sharp_term},
                              {"critical_term", terms[i].critical_term}},
                             ratios[i]});
    }
    aggregate_items(rep);
    const auto st = ratio_statistics(ratios, shifts, 4.0, INFINITY);
    rep.aggregate.slope = st.trend_slope;
    rep.set_metric("p", p);
    rep.set_metric("beta", beta);
    rep.set_metric("max_over_median", st.max / st.median);
    rep.verdict = st.stable ? Verdict::pass : Verdict::fail;
    rep.note = w.label();
    return rep;
}

VerificationReport check_weighted_bounds_maximal(const std::vector<CorpusItem>& corpus, const WeightFn& w,
                                                 const WeightedMaximalParams& params, const CriticalCover& cover) {
    if (!(params.s >= 1.0) || !(params.p > params.s)) throw std::invalid_argument("need p > s >= 1");
    const auto& grid = w.grid();
    const double cell = grid.cell_volume();
    const auto wv = w.real_values();
    VerificationReport rep;
    rep.experiment = "weighted_maximal";
    std::vector<double> rg, rm, shifts;
    for (const auto& item : corpus) {
        const auto fabs = abs_power(item.f, 1.0);
        const double norm_f = weighted_lp(fabs, wv, params.p, cell);
        const auto gv = g_kappa_p(item.f, params.kappa, params.s, params.n_big).values.real_part();
        const auto mv = m_tilde_s(item.f, params.s, cover).real_part();
        rg.push_back(weighted_lp(gv, wv, params.p, cell) / norm_f);
        rm.push_back(weighted_lp(mv, wv, params.p, cell) / norm_f);
        shifts.push_back(item.center[0]);
        rep.items.push_back({"G:" + item.id, {{"shift", item.center[0]}, {"width", item.width}}, rg.back()});
        rep.items.push_back({"Mtilde:" + item.id, {{"shift", item.center[0]}, {"width", item.width}}, rm.back()});
    }
    aggregate_items(rep);
    const auto sg = ratio_statistics(rg, shifts);
    const auto sm = ratio_statistics(rm, shifts);
    rep.aggregate.slope = std::abs(sg.trend_slope) > std::abs(sm.trend_slope) ? sg.trend_slope : sm.trend_slope;
    rep.set_metric("g_max", sg.max);
    rep.set_metric("g_median", sg.median);
    rep.set_metric("g_trend_slope", sg.trend_slope);
    rep.set_metric("mtilde_max", sm.max);
    rep.set_metric("mtilde_median", sm.median);
    rep.set_metric("mtilde_trend_slope", sm.trend_slope);

    const auto hyp = ap_theta_characteristic(w, params.p / params.s, params.theta,
                                             default_family(grid, grid.half_length() / 2.0));
    rep.set_metric("weight_characteristic", hyp.value);
    if (!stabilized(hyp.running_sup)) {
        rep.verdict = Verdict::hypothesis_unverified;
        rep.note = "weight not stabilized in A_{p/s}^theta";
        return rep;
    }
    rep.verdict = sg.stable && sm.stable ? Verdict::pass : Verdict::fail;
    rep.note = std::string("G ") + (sg.stable ? "stable" : "unstable") + ", M~ " + (sm.stable ? "stable" : "unstable");
    return rep;
}

}  // namespace wpsdo
