#pragma once

#include <span>
#include <string>
#include <vector>

#include "wpsdo/balls.hpp"
#include "wpsdo/psdo.hpp"
#include "wpsdo/report.hpp"

namespace wpsdo {

/**
 * K_k(x, z) = (2 pi)^-n sum_xi a_k(x, y, xi) e^{i<z, xi>} dxi^n for a set of
 * base points x, one inverse transform per base point. Amplitudes hold the y
 * slot fixed at y_slots[s]; symbols ignore it. values[s][i] is the kernel at
 * offset z = grid.point(i).
 */
struct DyadicKernel {
    int k = 0;
    std::vector<Point> base_points;
    std::vector<Point> y_slots;
    std::vector<SampledFunction> values;
};

// count points evenly spaced along the first axis of [-L/2, L/2].
std::vector<Point> default_base_points(const PeriodicGrid& grid, std::size_t count = 8);

// y slots default to the base points themselves.
DyadicKernel materialize_dyadic_kernel(const OperatorInstance& op, int k, std::span<const Point> x_samples);
DyadicKernel materialize_dyadic_kernel(const OperatorInstance& op, int k, std::span<const Point> x_samples,
                                       std::span<const Point> y_slots);

// sum_k K_k(x_j, x_j - y_l) over k = 0..truncation, as a row over l.
SampledFunction kernel_row_from_pieces(const OperatorInstance& op, std::size_t j);

// How a fitted slope is judged against expected_slope.
enum class SlopeTest { within_tolerance, at_most, positive, negative };

struct DecayFitReport {
    std::string regressor;  // "k", "j" or "log2|z|"
    std::vector<double> regressor_values;
    std::vector<double> log2_values;
    LinearFit fit;
    double expected_slope = 0.0;
    double tolerance = 0.0;
    SlopeTest test = SlopeTest::within_tolerance;
    Verdict verdict = Verdict::inconclusive;
    std::string note;

    VerificationReport to_report(const std::string& experiment) const;
};

inline constexpr double kMinRSquared = 0.9;

// Adjoint-kernel samples below this fraction of the peak count as round-off.
inline constexpr double kRoundOffFraction = 1e-12;

// Fits log2 values against the regressor and sets the verdict; R^2 below
// kMinRSquared gives inconclusive. Throws with fewer than min_points points.
DecayFitReport judge_fit(std::string regressor, std::vector<double> x, std::vector<double> log2_y, double expected,
                         double tolerance, SlopeTest test, std::size_t min_points = 2);

// log2 sup_{x, |z| <= L/2} |z|^ell |K_k(x, z)| against k; expected n + m - rho ell.
DecayFitReport fit_decay_in_k(const OperatorInstance& op, int ell, int k_lo, int k_hi, double tolerance = 0.15,
                              std::size_t base_point_count = 8);

struct DifferenceTableOptions {
    // Cap on sampled x per annulus (evenly thinned); y pairs use every point of B.
    std::size_t max_x_per_annulus = 64;
    // Replace ybar by y (the zero case).
    bool same_point = false;
};

// D(j, k) = sup_{x in S_j(B), y, ybar in B} |K_k(x, y) - K_k(x, ybar)|.
struct DifferenceTable {
    Ball ball{{0.0, 0.0}, 1.0};
    std::vector<int> js;
    std::vector<int> ks;
    std::vector<double> values;  // row-major over (j, k)

    double at(int j, int k) const;
};

// Throws if 2^j B leaves the box or 2^j r_B + r_B exceeds L/2 for some j, or j < 2.
DifferenceTable tabulate_kernel_differences(const OperatorInstance& op, const Ball& ball, const std::vector<int>& js,
                                            const std::vector<int>& ks, const DifferenceTableOptions& options = {});

// Slope of log2 D(., k) over j; passes when at most -n.
DecayFitReport fit_difference_in_j(const DifferenceTable& table, int k, int dim);

// Slope of log2 D(j, .) over the given k; expected positive while 2^k r_B <= 1
// and negative beyond.
DecayFitReport fit_difference_in_k(const DifferenceTable& table, int j, const std::vector<int>& ks);

struct DifferenceEstimateReport {
    DifferenceTable table;
    DecayFitReport j_fit;
    DecayFitReport k_fit_small;  // 2^k r_B <= 1
    DecayFitReport k_fit_large;  // 2^k r_B > 1
    Verdict verdict = Verdict::inconclusive;

    VerificationReport to_report(const std::string& experiment) const;
};

// j fit at the largest k with 2^k r_B <= 1; k fits at the smallest j.
DifferenceEstimateReport fit_difference_estimate(const OperatorInstance& op, const Ball& ball,
                                                 const std::vector<int>& js, const std::vector<int>& ks,
                                                 const DifferenceTableOptions& options = {});

// Column l of the adjoint kernel, K*(x_j, y_l) = apply_adjoint(delta_l / dx^n)[j].
SampledFunction adjoint_kernel_column(const OperatorInstance& op, std::size_t l);

struct AdjointKernelReport {
    // Far-field envelope: log2 of the sup of |K*| per dyadic |z| bin against log2 |z|.
    DecayFitReport far_field;
    // sup |K*(x, y)| |x - y|^{n + N_exp} over the far field, relative to the peak |K*|.
    double weighted_far_field = 0.0;
    double peak = 0.0;
    // sup |K*(y, x) - K*(ybar, x)| decay in j for each ball.
    std::vector<DecayFitReport> difference_fits;
    Verdict verdict = Verdict::inconclusive;

    VerificationReport to_report(const std::string& experiment) const;
};

/**
 * Far field: 4 dx < |x - y| <= L/2 with y at the grid center, x along the
 * first axis. Pass needs the envelope slope at most -(n + N_exp) (or a far
 * field at round-off level) and every difference fit in j at most -n.
 */
AdjointKernelReport adjoint_kernel_bounds(const OperatorInstance& op, int n_exp, const std::vector<Ball>& balls,
                                          const std::vector<int>& js);

}  // namespace wpsdo
