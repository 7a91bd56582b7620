#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wpsdo {

/**
 * Flat key=value configuration with section prefixes (grid.n=2048).
 * Blank lines and lines starting with '#' are skipped. Unknown keys and
 * malformed values are rejected with std::invalid_argument.
 */
struct ExperimentConfig {
    int dim = 1;
    std::size_t grid_n = 4096;
    double grid_l = 32.0;

    std::string symbol = "bessel_order_m";
    double symbol_m = -0.75;
    double symbol_rho = 1.0;
    double symbol_delta = 0.0;
    double symbol_width = 1.0;

    std::string weight = "power";
    double weight_exponent = 1.5;
    double p = 2.0;
    double theta = 1.5;
    double radius_cap = 32.0;

    std::string bmo = "linear";
    double bmo_theta = 1.0;
    double jn_s = 2.0;

    std::size_t corpus_count = 50;
    bool corpus_modulated = true;
    std::size_t fs_count = 30;

    // Local sweeps: corpus items used and the radius around each item's
    // center within which balls count as near its mass.
    std::size_t lemma_count = 12;
    double lemma_near = 4.0;

    double s = 1.5;
    double kappa = 1.0;
    int n_big = 8;
    double fs_beta = 0.5;

    int kernel_k_lo = 3;
    int kernel_k_hi = 7;
    std::vector<int> kernel_ells{0, 2};

    double ratio_factor = 4.0;
    double slope_tol = 0.1;

    // Runs outside a theorem's hypotheses report raw numbers only.
    bool counterexample = false;

    std::uint64_t seed = 1;
    std::string out_dir = "out";

    void set(const std::string& key, const std::string& value);
    // Canonical key=value lines, sorted by key (seed and output dir excluded).
    std::string canonical() const;
    // FNV-1a 64 of canonical(), as 16 hex digits.
    std::string hash() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace wpsdo
