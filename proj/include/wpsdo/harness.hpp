#pragma once

#include <string>
#include <vector>

#include "wpsdo/config.hpp"
#include "wpsdo/corpus.hpp"
#include "wpsdo/maximal.hpp"
#include "wpsdo/psdo.hpp"
#include "wpsdo/report.hpp"

namespace wpsdo {

PeriodicGrid config_grid(const ExperimentConfig& cfg);
SymbolSpec config_symbol(const ExperimentConfig& cfg);
WeightFn config_weight(const ExperimentConfig& cfg, const PeriodicGrid& grid);

// m < n(rho - 1), or the class A^0_{1,delta}.
bool theorem_class_hypothesis(const SymbolSpec& sym, int dim);

// Log2 sup of |z|^ell |K_k| against k for each configured ell. The k range is
// clipped to the resolved dyadic indices of the grid.
std::vector<VerificationReport> run_kernel_decay(const ExperimentConfig& cfg);

// A_p^theta characteristic of the configured weight (pass = stabilized) and
// monotonicity from p to p + 1.
std::vector<VerificationReport> run_weight_checks(const ExperimentConfig& cfg);

// BMO_theta norm of the configured b (pass = stabilized) and the
// John-Nirenberg variant.
std::vector<VerificationReport> run_bmo_checks(const ExperimentConfig& cfg);

VerificationReport run_maximal_check(const ExperimentConfig& cfg);
VerificationReport run_fs_check(const ExperimentConfig& cfg);

/**
 * ||T_a f_i||_{L^p(w)} / ||f_i||_{L^p(w)} over a Gaussian corpus of at least
 * 50 items (fewer throw). Pass when
 * max <= factor x median and |trend slope| <= slope_tol. Throws
 * std::invalid_argument naming the violated hypothesis unless the run is
 * flagged as a counterexample; a symbol or weight failing its sampled
 * membership test, or unweighted ratios that drift, give
 * hypothesis_unverified.
 */
VerificationReport run_boundedness_experiment(const ExperimentConfig& cfg);

// Same statistics for [b, T_a] with b the configured BMO preset.
VerificationReport run_commutator_experiment(const ExperimentConfig& cfg);

// Average of |T* f| (resp. |[b, T]* f|) over a critical ball Q.
double local_average_lhs(const OperatorInstance& op, const SampledFunction& f, const Ball& q,
                         const SampledFunction* b = nullptr);

/**
 * Discrete int over z outside 2B of |K*(x, z) - K*(y, z)| |f(z)| (times
 * |b(z) - b_B| when b is given), with x, y grid indices.
 */
double oscillation_lhs(const OperatorInstance& op, const SampledFunction& f, const Ball& ball, std::size_t x,
                       std::size_t y, const SampledFunction* b = nullptr);

/**
 * avg_Q |T* f| / inf_Q G_{kappa,p} f over critical balls Q near each item's
 * mass, and the commutator version divided by ||b||_theta as well. Pass:
 * max <= factor x median. Far balls are reported as metrics.
 */
std::vector<VerificationReport> run_local_average_check(const ExperimentConfig& cfg);

/**
 * sup over x, y in B of the oscillation integral divided by
 * inf_B G_{4,p} f + inf_B M~_p f, for balls of radius 1/2, 1, 2 centered near
 * each item's mass; the (b - b_B) version is divided by ||b||_theta as well.
 */
std::vector<VerificationReport> run_oscillation_check(const ExperimentConfig& cfg);

// kernel-decay, weights, bmo, maximal, fs, theorem13a, theorem13b, lemma41, lemma42.
std::vector<std::string> experiment_names();
// Runs one named experiment and stamps provenance. Throws for unknown names.
std::vector<VerificationReport> run_experiment(const std::string& name, const ExperimentConfig& cfg);

// {experiment, config_hash, seed, items, aggregate, metrics, verdict, note}
std::string report_json(const VerificationReport& report);
// Header id,<param names...>,value then one row per item.
std::string report_csv(const VerificationReport& report);
// {centers, radius, multiplicity: {sigma: histogram}} for sigma in 1, 2, 4, 8;
// histogram[c] counts grid points lying in exactly c dilated balls.
std::string cover_json(const CriticalCover& cover);
// Index over a batch: experiment, verdict, config_hash, seed per report.
std::string summary_json(const std::vector<VerificationReport>& reports, const ExperimentConfig& cfg);

}  // namespace wpsdo
