#pragma once

#include "wpsdo/grid.hpp"
#include "wpsdo/report.hpp"

namespace wpsdo {

// Smooth radial bump: 1 on |xi| <= 1, 0 on |xi| >= 2, glued with exp(-1/t)
// transitions in between.
double bump_profile(double r);

/**
 * Dyadic partition of unity phi_0, phi_k(xi) = phi(2^-k xi) with
 * phi = phi_0 - phi_0(2 .). The index range stops at K = ceil(log2 xi_max) + 1
 * so that the partial sum is exactly 1 on the whole frequency lattice.
 */
class LPFamily {
public:
    explicit LPFamily(const PeriodicGrid& grid);

    int max_index() const { return max_index_; }
    int dim() const { return dim_; }

    double piece_radial(int k, double r) const;
    double piece(int k, const Point& xi) const;

    // sum_{k <= K'} phi_k = phi_0(2^-K' xi).
    double partial_sum_radial(int truncation, double r) const;

    // Largest k whose support lies inside the lattice band, 2^{k+1} <= xi_max.
    int largest_resolved_index() const { return resolved_index_; }

private:
    int dim_;
    int max_index_;
    int resolved_index_;
};

LPFamily make_lp_family(const PeriodicGrid& grid);

// max over lattice xi with |xi| <= 2^{K-1} of |sum_{k<=K} phi_k(xi) - 1|.
double evaluate_partition_residual(const LPFamily& fam, const PeriodicGrid& grid);

// Central-difference sup of |d^alpha phi_k| along the first frequency axis for
// every resolved k >= 1. Items carry 2^{k alpha} * sup; the raw sups are fitted
// against k (metric "raw_slope").
VerificationReport derivative_bound_check(const LPFamily& fam, const PeriodicGrid& grid, int alpha);

// Central difference stencil of order 0..3 at step h.
double central_difference(const std::function<double(double)>& fn, double t, double h, int order);

}  // namespace wpsdo
