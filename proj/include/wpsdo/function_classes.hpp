#pragma once

#include <string>
#include <vector>

#include "wpsdo/balls.hpp"
#include "wpsdo/report.hpp"

namespace wpsdo {

// Real positive weight on a grid. Construction throws unless every value is
// real (|Im| < 1e-12), finite and strictly positive.
class WeightFn {
public:
    WeightFn(SampledFunction values, std::string label);

    const SampledFunction& values() const { return values_; }
    const PeriodicGrid& grid() const { return values_.grid(); }
    const std::string& label() const { return label_; }
    std::vector<double> real_values() const { return values_.real_part(); }

private:
    SampledFunction values_;
    std::string label_;
};

// unit (w = 1), power ((1 + |x|)^exponent), exponential (e^{|x|}).
WeightFn preset_weight(const std::string& name, const PeriodicGrid& grid, double exponent = 0.0);
std::vector<std::string> preset_weight_names();

// constant, linear (b = x_1), log_abs (log(|x| + dx)).
SampledFunction preset_bmo(const std::string& name, const PeriodicGrid& grid);
std::vector<std::string> preset_bmo_names();

/**
 * sup over the family of (int_B w)^{1/p} (int_B w^{-1/(p-1)})^{1/p'} / (|B| (1 + r_B)^theta)
 * with discrete integrals. running_sup[i] is the sup over balls of radius at
 * most radii[i].
 */
struct ApThetaCharacteristic {
    double p = 2.0;
    double theta = 0.0;
    double value = 0.0;
    Ball maximizer{{0.0, 0.0}, 1.0};
    std::vector<double> radii;
    std::vector<double> running_sup;
    std::string family;
};

// Throws for p <= 1, an empty family or a ball holding fewer than 8 points.
ApThetaCharacteristic ap_theta_characteristic(const WeightFn& w, double p, double theta, const BallFamily& family);

// Per-ball characteristics in family order (same normalization as above).
std::vector<double> ap_theta_per_ball(const WeightFn& w, double p, double theta, const std::vector<Ball>& balls,
                                      BallGeometry geometry = BallGeometry::clipped);

// sup over the family of (1/|B|) int_B |b - b_B| / (1 + r_B)^theta.
struct BmoThetaNorm {
    double theta = 0.0;
    double value = 0.0;
    Ball maximizer{{0.0, 0.0}, 1.0};
    std::vector<double> radii;
    std::vector<double> running_sup;
};

// Throws unless b is real-valued.
BmoThetaNorm bmo_theta_norm(const SampledFunction& b, double theta, const BallFamily& family);

// Mean oscillation (1/|B|) int_B |b - b_B|^s, and the average itself.
double mean_oscillation(const SampledFunction& b, const Ball& ball, double s = 1.0,
                        BallGeometry geometry = BallGeometry::clipped);
double mean_oscillation_about(const SampledFunction& b, const Ball& ball, double center_value, double s,
                              BallGeometry geometry = BallGeometry::clipped);

// Desk-scale membership: the last two radius doublings change the running sup
// by less than tol (relative). Needs at least three radii.
bool stabilized(const std::vector<double>& running_sup, double tol = 0.1);

// Characteristic at q never exceeds the one at p, ball by ball and in the sup.
VerificationReport check_monotonicity(const WeightFn& w, double p, double q, double theta, const BallFamily& family);

/**
 * Part (i): (avg_B |b - b_B|^s)^{1/s} / (||b||_theta (1 + r_B)^theta) over the family.
 * Part (ii): (avg_{2^k B} |b - b_B|^s)^{1/s} / (||b||_theta k (1 + 2^k r_B)^theta),
 * sup over balls with 2^k B inside the box, for each k. The literal reading
 * with |b - b_B| inside and the 1/s power outside is reported as metrics
 * literal_k<k>. Pass: part (i) max within 2x of its median, part (ii) finite
 * and nonincreasing in k.
 */
VerificationReport check_john_nirenberg_variant(const SampledFunction& b, double theta, double s,
                                                const BallFamily& family, int k_max = 5);

// Characteristic at p - eps stays stabilized (a weak witness of openness).
VerificationReport check_openness(const WeightFn& w, double p, double theta, const BallFamily& family,
                                  double eps = 0.1);

}  // namespace wpsdo
