#include "wpsdo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "wpsdo/function_classes.hpp"
#include "wpsdo/kernel_probe.hpp"
#include "wpsdo/symbols.hpp"

namespace wpsdo {

namespace {

using json = nlohmann::ordered_json;

// Ratios at or below this count as an operator vanishing on the corpus.
constexpr double kVanishing = 1e-12;

double flag(bool b) { return b ? 1.0 : 0.0; }

double avg_abs(const SampledFunction& g, const Ball& ball) {
    const auto idx = ball_indices(g.grid(), ball);
    double s = 0.0;
    for (auto i : idx) s += std::abs(g[i]);
    return s / static_cast<double>(idx.size());
}

double inf_over(const SampledFunction& g, const Ball& ball) {
    double m = std::numeric_limits<double>::infinity();
    for (auto i : ball_indices(g.grid(), ball)) m = std::min(m, std::abs(g[i]));
    return m;
}

double distance(const Point& a, const Point& b, int dim) { return norm({a[0] - b[0], a[1] - b[1]}, dim); }

std::size_t grid_index_of(const PeriodicGrid& grid, const Point& p) {
    const std::size_t c = grid.nearest_index(p[0]);
    return grid.dim() == 1 ? c : grid.flat_index(grid.nearest_index(p[1]), c);
}

void require_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("hypothesis violated: need 1 < p < infinity");
}

// Membership sweeps: dyadic radii from 8 dx up to min(cap, L), balls clipped
// to the box so the largest radii still contribute.
BallFamily membership_family(const PeriodicGrid& grid, double cap) {
    BallFamily fam;
    fam.center_stride = std::max<std::size_t>(1, grid.n() / 32);
    fam.radii = dyadic_radii(8.0 * grid.spacing(), std::min(cap, grid.half_length()));
    fam.inside_only = false;
    return fam;
}

bool weight_stabilized(const WeightFn& w, const ExperimentConfig& cfg, VerificationReport& rep) {
    const auto ch = ap_theta_characteristic(w, cfg.p, cfg.theta, membership_family(w.grid(), cfg.radius_cap));
    const bool ok = stabilized(ch.running_sup);
    rep.set_metric("weight_characteristic", ch.value);
    rep.set_metric("weight_stabilized", flag(ok));
    return ok;
}

// Fills max/median/trend metrics and returns whether the ratios are stable.
// A corpus on which the operator vanishes is trivially bounded.
bool corpus_statistics(VerificationReport& rep, const std::vector<double>& ratios, const std::vector<double>& shifts,
                       const ExperimentConfig& cfg, const std::string& prefix, bool with_trend) {
    const auto st = ratio_statistics(ratios, shifts, cfg.ratio_factor, with_trend ? cfg.slope_tol : INFINITY);
    rep.set_metric(prefix + "max", st.max);
    rep.set_metric(prefix + "median", st.median);
    if (with_trend) rep.set_metric(prefix + "trend_slope", st.trend_slope);
    rep.set_metric(prefix + "vanishing", flag(st.max <= kVanishing));
    return st.max <= kVanishing || st.stable;
}

void finish_ratio_report(VerificationReport& rep, const std::vector<double>& ratios, const std::vector<double>& shifts,
                         const ExperimentConfig& cfg, bool with_trend) {
    rep.set_metric("factor", cfg.ratio_factor);
    if (with_trend) rep.set_metric("slope_tol", cfg.slope_tol);
    const bool stable = corpus_statistics(rep, ratios, shifts, cfg, "", with_trend);
    aggregate_items(rep);
    if (with_trend) rep.aggregate.slope = rep.metric("trend_slope");
    rep.verdict = stable ? Verdict::pass : Verdict::fail;
    rep.note = rep.metric("vanishing") > 0.0 ? "operator vanishes on the corpus" : (stable ? "stable" : "unstable");
}

using CorpusOperator = std::function<SampledFunction(const SampledFunction&)>;

VerificationReport corpus_ratio_experiment(const ExperimentConfig& cfg, const std::string& name,
                                           const CorpusOperator& op, bool hypotheses_hold, const std::string& gate) {
    if (cfg.corpus_count < 50) throw std::invalid_argument("corpus.count must be at least 50");
    const auto grid = config_grid(cfg);
    const auto w = config_weight(cfg, grid);
    VerificationReport rep;
    rep.experiment = name;
    const bool w_ok = weight_stabilized(w, cfg, rep);

    const auto corpus = gaussian_corpus(grid, cfg.corpus_count, cfg.seed, cfg.corpus_modulated);
    std::vector<double> ratios, plain, shifts;
    for (const auto& item : corpus) {
        const auto tf = op(item.f);
        const double r = lp_norm(tf, cfg.p, w.values()) / lp_norm(item.f, cfg.p, w.values());
        const double u = lp_norm(tf, cfg.p) / lp_norm(item.f, cfg.p);
        ratios.push_back(r);
        plain.push_back(u);
        shifts.push_back(norm(item.center, grid.dim()));
        rep.items.push_back({item.id,
                             {{"center", item.center[0]},
                              {"width", item.width},
                              {"modulation", item.modulation},
                              {"unweighted", u}},
                             r});
    }
    finish_ratio_report(rep, ratios, shifts, cfg, true);
    const bool plain_ok = corpus_statistics(rep, plain, shifts, cfg, "unweighted_", true);

    if (!hypotheses_hold) {
        rep.verdict = Verdict::hypothesis_unverified;
        rep.note = gate;
    } else if (!w_ok) {
        rep.verdict = Verdict::hypothesis_unverified;
        rep.note = "weight not stabilized in A_p^theta";
    } else if (!plain_ok) {
        rep.verdict = Verdict::hypothesis_unverified;
        rep.note = "unweighted ratios drift";
    }
    return rep;
}

// Hypothesis gate shared by the boundedness and commutator runs.
std::pair<bool, std::string> symbol_gate(const ExperimentConfig& cfg, const SymbolSpec& sym, const PeriodicGrid& grid,
                                         VerificationReport& rep) {
    require_p(cfg.p);
    const bool in_class = theorem_class_hypothesis(sym, grid.dim());
    if (!in_class && !cfg.counterexample)
        throw std::invalid_argument("hypothesis violated for " + sym.label +
                                    ": need m < n(rho - 1) or a in A^0_{1,delta}");
    const bool member = estimate_class_membership(sym, grid).member();
    rep.set_metric("class_hypothesis", flag(in_class));
    rep.set_metric("class_member", flag(member));
    if (!in_class) return {false, "counterexample run outside the theorem's class"};
    if (!member) return {false, "symbol fails its sampled class membership"};
    return {true, ""};
}

double config_bmo_norm(const ExperimentConfig& cfg, const SampledFunction& b, bool* stable = nullptr) {
    const auto n = bmo_theta_norm(b, cfg.bmo_theta, membership_family(b.grid(), cfg.radius_cap));
    if (stable) *stable = stabilized(n.running_sup);
    return n.value;
}

std::vector<VerificationReport> stamped(std::vector<VerificationReport> reps, const ExperimentConfig& cfg) {
    const auto h = cfg.hash();
    for (auto& r : reps) {
        r.config_hash = h;
        r.seed = cfg.seed;
    }
    return reps;
}

json named_values(const NamedValues& v) {
    json o = json::object();
    for (const auto& [k, x] : v) o[k] = x;
    return o;
}

json report_object(const VerificationReport& r) {
    json items = json::array();
    for (const auto& it : r.items) items.push_back({{"id", it.id}, {"params", named_values(it.params)}, {"value", it.value}});
    return {{"experiment", r.experiment},
            {"config_hash", r.config_hash},
            {"seed", r.seed},
            {"items", items},
            {"aggregate", {{"max", r.aggregate.max}, {"median", r.aggregate.median}, {"slope", r.aggregate.slope}}},
            {"metrics", named_values(r.metrics)},
            {"verdict", to_string(r.verdict)},
            {"note", r.note}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

PeriodicGrid config_grid(const ExperimentConfig& cfg) { return make_grid(cfg.dim, cfg.grid_n, cfg.grid_l); }

SymbolSpec config_symbol(const ExperimentConfig& cfg) {
    PresetParams pp;
    pp.dim = cfg.dim;
    pp.m = cfg.symbol_m;
    pp.rho = cfg.symbol_rho;
    pp.delta = cfg.symbol_delta;
    pp.width = cfg.symbol_width;
    return preset_symbol(cfg.symbol, pp);
}

WeightFn config_weight(const ExperimentConfig& cfg, const PeriodicGrid& grid) {
    return preset_weight(cfg.weight, grid, cfg.weight_exponent);
}

bool theorem_class_hypothesis(const SymbolSpec& sym, int dim) {
    return sym.order < dim * (sym.rho - 1.0) || (sym.rho == 1.0 && sym.order <= 0.0);
}

std::vector<VerificationReport> run_kernel_decay(const ExperimentConfig& cfg) {
    const auto grid = config_grid(cfg);
    const OperatorInstance op(config_symbol(cfg), grid);
    const int k_hi = std::min(cfg.kernel_k_hi, op.lp().largest_resolved_index());
    if (k_hi - cfg.kernel_k_lo + 1 < 4)
        throw std::invalid_argument("grid resolves dyadic pieces only up to k = " +
                                    std::to_string(op.lp().largest_resolved_index()) + "; need four k values");
    std::vector<VerificationReport> out;
    for (int ell : cfg.kernel_ells) {
        auto rep = fit_decay_in_k(op, ell, cfg.kernel_k_lo, k_hi).to_report("kernel_decay_ell" + std::to_string(ell));
        for (auto& it : rep.items) it.params.emplace_back("ell", ell);
        rep.set_metric("ell", ell);
        rep.set_metric("k_hi", k_hi);
        if (k_hi < cfg.kernel_k_hi) rep.note += "; k range clipped to " + std::to_string(k_hi);
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<VerificationReport> run_weight_checks(const ExperimentConfig& cfg) {
    const auto grid = config_grid(cfg);
    const auto w = config_weight(cfg, grid);
    const auto fam = membership_family(grid, cfg.radius_cap);
    const auto ch = ap_theta_characteristic(w, cfg.p, cfg.theta, fam);
    VerificationReport rep;
    rep.experiment = "weight_ap_theta";
    for (std::size_t i = 0; i < ch.radii.size(); ++i)
        rep.items.push_back({"r=" + format_number(ch.radii[i]), {{"radius", ch.radii[i]}}, ch.running_sup[i]});
    aggregate_items(rep);
    rep.set_metric("p", cfg.p);
    rep.set_metric("theta", cfg.theta);
    rep.set_metric("characteristic", ch.value);
    const bool ok = stabilized(ch.running_sup);
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    rep.note = w.label() + (ok ? " stabilized" : " not stabilized") + " (last two doublings within 10%)";
    return {rep, check_monotonicity(w, cfg.p, cfg.p + 1.0, cfg.theta, fam)};
}

std::vector<VerificationReport> run_bmo_checks(const ExperimentConfig& cfg) {
    const auto grid = config_grid(cfg);
    const auto b = preset_bmo(cfg.bmo, grid);
    const auto fam = membership_family(grid, cfg.radius_cap);
    const auto n = bmo_theta_norm(b, cfg.bmo_theta, fam);
    VerificationReport rep;
    rep.experiment = "bmo_theta";
    for (std::size_t i = 0; i < n.radii.size(); ++i)
        rep.items.push_back({"r=" + format_number(n.radii[i]), {{"radius", n.radii[i]}}, n.running_sup[i]});
    aggregate_items(rep);
    rep.set_metric("theta", cfg.bmo_theta);
    rep.set_metric("norm", n.value);
    const bool ok = stabilized(n.running_sup);
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    rep.note = cfg.bmo + (ok ? " stabilized" : " not stabilized");
    return {rep, check_john_nirenberg_variant(b, cfg.bmo_theta, cfg.jn_s, fam)};
}

VerificationReport run_maximal_check(const ExperimentConfig& cfg) {
    const auto grid = config_grid(cfg);
    const auto cover = build_critical_cover(grid);
    const auto corpus = gaussian_corpus(grid, cfg.corpus_count, cfg.seed, cfg.corpus_modulated);
    WeightedMaximalParams params;
    params.p = cfg.p;
    params.s = cfg.s;
    params.theta = cfg.theta;
    params.kappa = cfg.kappa;
    params.n_big = cfg.n_big;
    return check_weighted_bounds_maximal(corpus, config_weight(cfg, grid), params, cover);
}

VerificationReport run_fs_check(const ExperimentConfig& cfg) {
    const auto grid = config_grid(cfg);
    const auto cover = build_critical_cover(grid);
    const auto corpus = gaussian_corpus(grid, cfg.fs_count, cfg.seed, cfg.corpus_modulated);
    return check_fs_inequality(corpus, config_weight(cfg, grid), cfg.p, cfg.fs_beta, cover);
}

VerificationReport run_boundedness_experiment(const ExperimentConfig& cfg) {
    const auto grid = config_grid(cfg);
    const auto sym = config_symbol(cfg);
    VerificationReport gate_metrics;
    const auto [ok, gate] = symbol_gate(cfg, sym, grid, gate_metrics);
    const OperatorInstance op(sym, grid);
    auto rep = corpus_ratio_experiment(cfg, "theorem13a", [&](const SampledFunction& f) { return apply(op, f); }, ok,
                                       gate);
    for (const auto& [k, v] : gate_metrics.metrics) rep.set_metric(k, v);
    return rep;
}

VerificationReport run_commutator_experiment(const ExperimentConfig& cfg) {
    const auto grid = config_grid(cfg);
    const auto sym = config_symbol(cfg);
    VerificationReport gate_metrics;
    auto [ok, gate] = symbol_gate(cfg, sym, grid, gate_metrics);
    const auto b = preset_bmo(cfg.bmo, grid);
    bool b_ok = false;
    const double bnorm = config_bmo_norm(cfg, b, &b_ok);
    if (ok && !b_ok) {
        ok = false;
        gate = "b not stabilized in BMO_theta";
    }
    const OperatorInstance op(sym, grid);
    auto rep = corpus_ratio_experiment(
        cfg, "theorem13b", [&](const SampledFunction& f) { return commutator(op, b, f); }, ok, gate);
    for (const auto& [k, v] : gate_metrics.metrics) rep.set_metric(k, v);
    rep.set_metric("bmo_norm", bnorm);
    rep.set_metric("bmo_stabilized", flag(b_ok));
    return rep;
}

double local_average_lhs(const OperatorInstance& op, const SampledFunction& f, const Ball& q, const SampledFunction* b) {
    return avg_abs(b ? commutator_adjoint(op, *b, f) : apply_adjoint(op, f), q);
}

double oscillation_lhs(const OperatorInstance& op, const SampledFunction& f, const Ball& ball, std::size_t x,
                       std::size_t y, const SampledFunction* b) {
    if (x == y) return 0.0;
    const auto& grid = op.grid();
    const auto kx = kernel_column(op, x);
    const auto ky = kernel_column(op, y);
    const double bb = b ? ball_average(*b, ball).real() : 0.0;
    double s = 0.0;
    for (std::size_t z = 0; z < grid.size(); ++z) {
        if (distance(grid.point(z), ball.center(), grid.dim()) <= 2.0 * ball.radius()) continue;
        // K*(x, z) = conj K(z, x)
        double term = std::abs(std::conj(kx[z]) - std::conj(ky[z])) * std::abs(f[z]);
        if (b) term *= std::abs((*b)[z].real() - bb);
        s += term;
    }
    return s * grid.cell_volume();
}

std::vector<VerificationReport> run_local_average_check(const ExperimentConfig& cfg) {
    require_p(cfg.p);
    const auto grid = config_grid(cfg);
    const OperatorInstance op(config_symbol(cfg), grid);
    const auto cover = build_critical_cover(grid);
    const auto b = preset_bmo(cfg.bmo, grid);
    const double bnorm = config_bmo_norm(cfg, b);
    const auto corpus = gaussian_corpus(grid, cfg.lemma_count, cfg.seed, cfg.corpus_modulated);

    VerificationReport ra, rb;
    ra.experiment = "lemma41a";
    rb.experiment = "lemma41b";
    std::vector<double> near_a, near_b, far_a, far_b;
    for (const auto& item : corpus) {
        const auto ta = apply_adjoint(op, item.f);
        const auto tb = commutator_adjoint(op, b, item.f);
        const auto g = g_kappa_p(item.f, cfg.kappa, cfg.p, cfg.n_big).values;
        for (std::size_t j = 0; j < cover.centers.size(); ++j) {
            const Ball q = cover.ball(j);
            const double inf_g = inf_over(g, q);
            const double a = avg_abs(ta, q) / inf_g;
            const double c = bnorm > 0.0 ? avg_abs(tb, q) / (inf_g * bnorm) : 0.0;
            const double d = distance(q.center(), item.center, grid.dim());
            if (d > cfg.lemma_near) {
                far_a.push_back(a);
                far_b.push_back(c);
                continue;
            }
            const std::string id = item.id + "/Q" + std::to_string(j);
            const NamedValues params{{"q_center", q.center()[0]}, {"distance", d}};
            ra.items.push_back({id, params, a});
            rb.items.push_back({id, params, c});
            near_a.push_back(a);
            near_b.push_back(c);
        }
    }
    auto finish = [&](VerificationReport& rep, const std::vector<double>& near, const std::vector<double>& far) {
        finish_ratio_report(rep, near, std::vector<double>(near.size(), 0.0), cfg, false);
        rep.set_metric("near_radius", cfg.lemma_near);
        rep.set_metric("far_max", far.empty() ? 0.0 : max_value(far));
        rep.set_metric("bmo_norm", bnorm);
    };
    finish(ra, near_a, far_a);
    finish(rb, near_b, far_b);
    return {ra, rb};
}

std::vector<VerificationReport> run_oscillation_check(const ExperimentConfig& cfg) {
    require_p(cfg.p);
    const auto grid = config_grid(cfg);
    const OperatorInstance op(config_symbol(cfg), grid);
    const auto cover = build_critical_cover(grid);
    const auto b = preset_bmo(cfg.bmo, grid);
    const double bnorm = config_bmo_norm(cfg, b);
    const auto corpus = gaussian_corpus(grid, cfg.lemma_count, cfg.seed, cfg.corpus_modulated);

    // Kernel columns depend on the operator only.
    std::map<std::size_t, SampledFunction> columns;
    auto column = [&](std::size_t i) -> const SampledFunction& {
        auto it = columns.find(i);
        if (it == columns.end()) it = columns.emplace(i, kernel_column(op, i)).first;
        return it->second;
    };

    VerificationReport ra, rb;
    ra.experiment = "lemma42a";
    rb.experiment = "lemma42b";
    std::vector<double> va, vb;
    for (const auto& item : corpus) {
        const auto g4 = g_kappa_p(item.f, 4.0, cfg.p, cfg.n_big).values;
        const auto mt = m_tilde_s(item.f, cfg.p, cover);
        for (std::size_t j = 0; j < cover.centers.size(); ++j) {
            const Point c = cover.centers[j];
            if (distance(c, item.center, grid.dim()) > cfg.lemma_near) continue;
            for (double r : {0.5, 1.0, 2.0}) {
                const Ball ball(c, r);
                const double rhs = inf_over(g4, ball) + inf_over(mt, ball);
                const double bb = ball_average(b, ball).real();
                const std::size_t x = grid_index_of(grid, c);
                const auto& kx = column(x);
                double la = 0.0, lb = 0.0;
                for (double t : {-1.0, 0.5, 1.0}) {
                    const std::size_t y = grid_index_of(grid, {c[0] + t * r, grid.dim() == 2 ? c[1] : 0.0});
                    const auto& ky = column(y);
                    double sa = 0.0, sb = 0.0;
                    for (std::size_t z = 0; z < grid.size(); ++z) {
                        if (distance(grid.point(z), c, grid.dim()) <= 2.0 * r) continue;
                        const double term = std::abs(std::conj(kx[z]) - std::conj(ky[z])) * std::abs(item.f[z]);
                        sa += term;
                        sb += term * std::abs(b[z].real() - bb);
                    }
                    la = std::max(la, sa * grid.cell_volume());
                    lb = std::max(lb, sb * grid.cell_volume());
                }
                const std::string id = item.id + "/B" + std::to_string(j) + "r" + format_number(r);
                const NamedValues params{{"b_center", c[0]}, {"radius", r}, {"rhs", rhs}};
                ra.items.push_back({id, params, la / rhs});
                rb.items.push_back({id, params, bnorm > 0.0 ? lb / (rhs * bnorm) : 0.0});
                va.push_back(la / rhs);
                vb.push_back(bnorm > 0.0 ? lb / (rhs * bnorm) : 0.0);
            }
        }
    }
    for (auto* rep : {&ra, &rb}) {
        const auto& v = rep == &ra ? va : vb;
        finish_ratio_report(*rep, v, std::vector<double>(v.size(), 0.0), cfg, false);
        rep->set_metric("near_radius", cfg.lemma_near);
        rep->set_metric("bmo_norm", bnorm);
    }
    return {ra, rb};
}

std::vector<std::string> experiment_names() {
    return {"kernel-decay", "weights", "bmo", "maximal", "fs", "theorem13a", "theorem13b", "lemma41", "lemma42"};
}

std::vector<VerificationReport> run_experiment(const std::string& name, const ExperimentConfig& cfg) {
    if (name == "kernel-decay") return stamped(run_kernel_decay(cfg), cfg);
    if (name == "weights") return stamped(run_weight_checks(cfg), cfg);
    if (name == "bmo") return stamped(run_bmo_checks(cfg), cfg);
    if (name == "maximal") return stamped({run_maximal_check(cfg)}, cfg);
    if (name == "fs") return stamped({run_fs_check(cfg)}, cfg);
    if (name == "theorem13a") return stamped({run_boundedness_experiment(cfg)}, cfg);
    if (name == "theorem13b") return stamped({run_commutator_experiment(cfg)}, cfg);
    if (name == "lemma41") return stamped(run_local_average_check(cfg), cfg);
    if (name == "lemma42") return stamped(run_oscillation_check(cfg), cfg);
    throw std::invalid_argument("unknown experiment " + name);
}

std::string report_json(const VerificationReport& report) { return report_object(report).dump(2) + "\n"; }

std::string report_csv(const VerificationReport& report) {
    std::vector<std::string> names;
    for (const auto& it : report.items)
        for (const auto& [k, v] : it.params)
            if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);
    std::string out = "id";
    for (const auto& n : names) out += "," + csv_field(n);
    out += ",value\n";
    for (const auto& it : report.items) {
        out += csv_field(it.id);
        for (const auto& n : names) {
            out += ",";
            for (const auto& [k, v] : it.params)
                if (k == n) out += format_number(v, 17);
        }
        out += "," + format_number(it.value, 17) + "\n";
    }
    return out;
}

std::string cover_json(const CriticalCover& cover) {
    json centers = json::array();
    for (const auto& c : cover.centers) centers.push_back(cover.grid.dim() == 1 ? json::array({c[0]}) : json::array({c[0], c[1]}));
    json mult = json::object();
    for (double sigma : {1.0, 2.0, 4.0, 8.0}) {
        std::vector<std::size_t> hist;
        for (int m : cover.multiplicity(sigma)) {
            if (static_cast<std::size_t>(m) >= hist.size()) hist.resize(static_cast<std::size_t>(m) + 1, 0);
            ++hist[static_cast<std::size_t>(m)];
        }
        mult[format_number(sigma)] = hist;
    }
    json o = {{"radius", cover.radius}, {"centers", centers}, {"multiplicity", mult}};
    return o.dump(2) + "\n";
}

std::string summary_json(const std::vector<VerificationReport>& reports, const ExperimentConfig& cfg) {
    json list = json::array();
    bool all = !reports.empty();
    for (const auto& r : reports) {
        list.push_back({{"experiment", r.experiment}, {"verdict", to_string(r.verdict)}, {"note", r.note}});
        all = all && r.passed();
    }
    json o = {{"config_hash", cfg.hash()}, {"seed", cfg.seed}, {"experiments", list}, {"all_pass", all}};
    return o.dump(2) + "\n";
}

}  // namespace wpsdo
