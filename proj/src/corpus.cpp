#include "wpsdo/corpus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace wpsdo {

std::vector<CorpusItem> gaussian_corpus(const PeriodicGrid& grid, std::size_t count, std::uint64_t seed,
                                        bool modulated) {
    if (count == 0) throw std::invalid_argument("corpus needs at least one item");
    const double half = grid.half_length() / 2.0;
    std::vector<CorpusItem> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
        std::uniform_real_distribution<double> uw(0.5, 1.5), um(0.0, 2.0);
        CorpusItem item{"", SampledFunction(grid), {0.0, 0.0}, uw(rng), 0.0};
        item.modulation = modulated ? um(rng) : 0.0;
        const double reach = std::max(0.0, half - 7.0 * item.width);
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        item.center = {grid.coord(grid.nearest_index(sign * t * reach)), 0.0};
        item.id = "gauss" + std::to_string(i);
        const int dim = grid.dim();
        const Point c = item.center;
        const double w = item.width, mod = item.modulation;
        item.f = SampledFunction::from_function(grid, [=](const Point& x) {
            const Point d{x[0] - c[0], dim == 2 ? x[1] - c[1] : 0.0};
            const double r = norm(d, dim);
            return std::exp(-0.5 * r * r / (w * w)) * std::polar(1.0, mod * x[0]);
        });
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace wpsdo
