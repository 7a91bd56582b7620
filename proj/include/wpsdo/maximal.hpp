#pragma once

#include <string>
#include <vector>

#include "wpsdo/balls.hpp"
#include "wpsdo/corpus.hpp"
#include "wpsdo/function_classes.hpp"
#include "wpsdo/report.hpp"

namespace wpsdo {

// Critical balls Q_j = B(x_j, 1) from a greedy Vitali pass over the grid.
struct CriticalCover {
    PeriodicGrid grid;
    std::vector<Point> centers;
    double radius = 1.0;

    Ball ball(std::size_t j, double dilation = 1.0) const { return Ball(centers[j], dilation * radius); }
    // Per grid point: number of j with the point in sigma Q_j.
    std::vector<int> multiplicity(double sigma) const;
    int max_multiplicity(double sigma) const;
    // Every grid point lies in some Q_j.
    bool covers() const;
    // Indices j with the grid point in Q_j.
    std::vector<std::size_t> covering(std::size_t flat) const;
};

/**
 * Scans grid points in flat order and keeps x whenever B(x, 1/5) misses every
 * kept B(x_j, 1/5), i.e. |x - x_j| >= 2/5. Maximality puts every grid point
 * within 2/5 of a center. Throws for L < 4.
 */
CriticalCover build_critical_cover(const PeriodicGrid& grid);

// Centers every `stride` grid points along each axis, dyadic radii from 8 dx
// up to alpha, balls clipped to the box.
BallFamily local_family(const PeriodicGrid& grid, double alpha, std::size_t stride = 8);

// sup over family balls B containing x (radius <= alpha) of avg_B |g|, resp. avg_B |g - g_B|.
SampledFunction m_loc(const SampledFunction& g, double alpha, std::size_t stride = 8);
SampledFunction m_sharp_loc(const SampledFunction& g, double alpha, std::size_t stride = 8);

// Same sups over a fixed ball Q, with every average taken over B intersected with Q.
// Output is zero off Q.
SampledFunction m_q(const SampledFunction& g, const Ball& q, double alpha, std::size_t stride = 8);
SampledFunction m_sharp_q(const SampledFunction& g, const Ball& q, double alpha, std::size_t stride = 8);

// sup over family balls containing x of (avg_B |g|^s)^{1/s}, radii 8 dx .. L.
SampledFunction hardy_littlewood_s(const SampledFunction& g, double s, std::size_t stride = 8);

struct GKappaResult {
    SampledFunction values;
    // Largest ratio of the whole-box tail to the retained sum over all Q.
    double tail_fraction = 0.0;
};

/**
 * sup over critical balls Q containing x (centers on the stride sublattice) of
 * sum_k 2^{-N k} (avg_{2^k kappa Q} |f|^p)^{1/p}. Averages use balls clipped
 * to the box while 2^k kappa <= L; later terms use the whole-box average and
 * are summed in closed form.
 */
GKappaResult g_kappa_p(const SampledFunction& f, double kappa, double p, int n_big = 8, std::size_t stride = 8);

// max over j with x in Q_j of M_s(f chi_{8 Q_j})(x); zero off the cover.
SampledFunction m_tilde_s(const SampledFunction& f, double s, const CriticalCover& cover, std::size_t stride = 8);

struct FsTerms {
    double lhs = 0.0;          // int |M_loc,beta g|^p w
    double sharp_term = 0.0;   // int |M#_loc,4 g|^p w
    double critical_term = 0.0;  // sum_k w(Q_k) (avg_{2Q_k} |g|)^p
    double ratio() const { return lhs / (sharp_term + critical_term); }
};

FsTerms fs_terms(const SampledFunction& g, const WeightFn& w, double p, double beta, const CriticalCover& cover);

// Ratio per corpus item; pass when max <= 4 x median.
VerificationReport check_fs_inequality(const std::vector<CorpusItem>& corpus, const WeightFn& w, double p,
                                       double beta, const CriticalCover& cover);

struct WeightedMaximalParams {
    double p = 2.0;
    double s = 1.5;
    double theta = 1.5;
    double kappa = 1.0;
    int n_big = 8;
};

/**
 * ||G_{kappa,s} f||_{L^p(w)} / ||f||_{L^p(w)} and the same for M~_s over the
 * corpus. Pass: for both operators max <= 4 x median and the slope of
 * log ratio against log(1 + |center|) within +-0.1. Throws for p <= s or
 * s < 1. Verdict hypothesis_unverified when w fails the A_{p/s}^theta
 * stabilization test on the default family.
 */
VerificationReport check_weighted_bounds_maximal(const std::vector<CorpusItem>& corpus, const WeightFn& w,
                                                 const WeightedMaximalParams& params, const CriticalCover& cover);

// Statistic used by the corpus checks: max <= factor x median and |trend| <= slope_tol.
struct RatioStatistics {
    double max = 0.0;
    double median = 0.0;
    double trend_slope = 0.0;
    bool stable = false;
};

RatioStatistics ratio_statistics(const std::vector<double>& ratios, const std::vector<double>& shifts,
                                 double factor = 4.0, double slope_tol = 0.1);

}  // namespace wpsdo
