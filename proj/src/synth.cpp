#include "fracmem/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fracmem/rng.hpp"

namespace fracmem {

Mask random_connected_mask(int dim, std::uint64_t seed, int min_cells, int max_cells,
                           double h) {
    if (min_cells < 1 || max_cells < min_cells)
        throw ParameterError("invalid cell-count range");
    Rng rng = substream(seed, 0xabcdULL);
    const int target = rng.range(min_cells, max_cells);

    // generous box so growth never hits the boundary often
    const int side = dim == 1 ? 4 * max_cells : 4 * static_cast<int>(std::ceil(std::sqrt(max_cells))) + 6;
    const Grid grid = make_grid(dim, {-0.5 * side * h, dim == 2 ? -0.5 * side * h : 0.0}, h,
                                {side, dim == 2 ? side : 1});

    const Coord start{side / 2, dim == 2 ? side / 2 : 0};
    std::set<int> cells{grid.index_of(start)};
    std::vector<int> frontier{grid.index_of(start)};
    while (static_cast<int>(cells.size()) < target && !frontier.empty()) {
        const std::size_t pick = rng.below(frontier.size());
        const Coord c = grid.coord_of(frontier[pick]);
        const Coord nbrs[4] = {{c[0] - 1, c[1]}, {c[0] + 1, c[1]}, {c[0], c[1] - 1}, {c[0], c[1] + 1}};
        std::vector<int> open;
        for (int k = 0; k < (dim == 1 ? 2 : 4); ++k) {
            if (!grid.in_range(nbrs[k])) continue;
            const int idx = grid.index_of(nbrs[k]);
            if (!cells.count(idx)) open.push_back(idx);
        }
        if (open.empty()) {
            frontier.erase(frontier.begin() + static_cast<long>(pick));
            continue;
        }
        const int chosen = open[rng.below(open.size())];
        cells.insert(chosen);
        frontier.push_back(chosen);
    }
    return mask_from_cells(grid, std::vector<int>(cells.begin(), cells.end()));
}

Field gaussian_bumps_field(const Mask& mask, std::uint64_t seed, int bumps) {
    Rng rng = substream(seed, 0x9d2cULL);
    const Grid& g = mask.grid;
    Coord lo, hi;
    mask.bounding_box(lo, hi);
    const auto plo = g.center(lo);
    const auto phi = g.center(hi);
    const double span0 = std::max(phi[0] - plo[0], g.h);
    const double span1 = g.dim == 2 ? std::max(phi[1] - plo[1], g.h) : 0.0;

    struct Bump {
        double c0, c1, amp, sig;
    };
    std::vector<Bump> bs;
    for (int b = 0; b < bumps; ++b) {
        Bump bump;
        bump.c0 = rng.uniform(plo[0], phi[0]);
        bump.c1 = g.dim == 2 ? rng.uniform(plo[1], phi[1]) : 0.0;
        bump.amp = rng.uniform(0.5, 1.5);
        bump.sig = rng.uniform(0.10, 0.35) * std::max(span0, span1);
        bs.push_back(bump);
    }
    std::vector<double> vals(mask.cells.size());
    for (std::size_t p = 0; p < mask.cells.size(); ++p) {
        const auto x = g.center(g.coord_of(mask.cells[p]));
        double v = 0.0;
        for (const auto& b : bs) {
            const double dx = x[0] - b.c0;
            const double dy = g.dim == 2 ? x[1] - b.c1 : 0.0;
            v += b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sig * b.sig));
        }
        vals[p] = v;
    }
    return make_field(mask, std::move(vals));
}

double mollifier(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

Field sampled_bump_field(const Mask& mask, std::array<double, 2> center, double radius,
                         double amplitude) {
    const Grid& g = mask.grid;
    std::vector<double> vals(mask.cells.size());
    for (std::size_t p = 0; p < mask.cells.size(); ++p) {
        const auto x = g.center(g.coord_of(mask.cells[p]));
        const double dx = x[0] - center[0];
        const double dy = g.dim == 2 ? x[1] - center[1] : 0.0;
        vals[p] = amplitude * mollifier(std::sqrt(dx * dx + dy * dy) / radius);
    }
    return make_field(mask, std::move(vals));
}

}  // namespace fracmem
