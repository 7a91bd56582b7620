#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpsdo/grid.hpp"

namespace wpsdo {

struct CorpusItem {
    std::string id;
    SampledFunction f;
    Point center;
    double width = 1.0;
    double modulation = 0.0;
};

/**
 * Modulated Gaussians e^{-|x-c|^2 / (2 width^2)} e^{i mod x_1} whose centers
 * alternate in sign and sweep outward along the first axis, keeping
 * |c| + 7 width <= L/2. Widths and modulations are drawn from a generator
 * seeded per item, so any item is reproducible from (seed, index) alone.
 */
std::vector<CorpusItem> gaussian_corpus(const PeriodicGrid& grid, std::size_t count, std::uint64_t seed,
                                        bool modulated = true);

}  // namespace wpsdo
